#include <doctest.h>

#include <znt/characteristics.hpp>

using namespace znt;

namespace {

RationalCharacteristic make(std::vector<Rat> d, std::vector<Rat> e) {
    RationalCharacteristic ch((int)d.size());
    ch.delta = std::move(d);
    ch.epsilon = std::move(e);
    return ch;
}

}  // namespace

TEST_CASE("mod1 folds into [0,1)") {
    CHECK(mod1(Rat(-1, 3)) == Rat(2, 3));
    CHECK(mod1(Rat(7, 3)) == Rat(1, 3));
    CHECK(mod1(Rat(-4, 2)) == Rat(0));
}

TEST_CASE("branch point characteristic table, N=3 m=1") {
    CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
    CHECK(branch_point_characteristic(spec, 1) ==
          make({Rat(2, 3), Rat(2, 3)}, {Rat(0), Rat(0)}));
    CHECK(branch_point_characteristic(spec, 2) ==
          make({Rat(2, 3), Rat(2, 3)}, {Rat(1, 3), Rat(2, 3)}));
    CHECK(branch_point_characteristic(spec, 3) ==
          make({Rat(0), Rat(0)}, {Rat(1, 3), Rat(2, 3)}));
    // base point: zero characteristic
    CHECK(branch_point_characteristic(spec, 4) == RationalCharacteristic(2));
    CHECK_THROWS_AS(branch_point_characteristic(spec, 5), ConfigInvalid);

    CHECK(riemann_constant_characteristic(spec) ==
          make({Rat(1, 3), Rat(1, 3)}, {Rat(2, 3), Rat(1, 3)}));
}

TEST_CASE("the distinguished partition carries the zero characteristic") {
    for (int N : {2, 3, 4}) {
        CurveSpec spec(N, 1, {0.0, 0.3, 1.0});
        Partition p;  // I1 = all odd points, J1 empty
        p.I1 = {1, 3};
        CHECK(em_characteristic(spec, p) == RationalCharacteristic(spec.genus()));
    }
}

TEST_CASE("M+1 characteristic example") {
    CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
    Partition p;
    p.im = 1;
    p.jm = 2;
    CHECK(em1_characteristic(spec, p) == make({Rat(0), Rat(0)}, {Rat(2, 3), Rat(1, 3)}));
}

TEST_CASE("partition validation") {
    CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
    Partition bad;
    bad.I1 = {2};  // even index in the odd pool
    CHECK_THROWS_AS(validate_partition(spec, bad), InvalidPartition);
    Partition wrong_card;
    wrong_card.I1 = {1};
    CHECK_THROWS_AS(validate_partition(spec, wrong_card), InvalidPartition);
    Partition clash;
    clash.im = 1;
    clash.jm = 2;
    clash.I1 = {1};  // i_m must avoid I1, and the cardinality is off anyway
    CHECK_THROWS_AS(validate_partition(spec, clash), InvalidPartition);
}

TEST_CASE("family enumeration counts") {
    CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
    CHECK(enumerate_partitions(spec, Family::M).size() == 6);  // C(4,2)
    // m-1 = 0 picks nothing; i_m from {1,3}, j_m only 2 (the base point is
    // excluded)
    CHECK(enumerate_partitions(spec, Family::M_PLUS_1).size() == 2);

    CurveSpec spec2(2, 2, {0.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(enumerate_partitions(spec2, Family::M).size() == 20);  // C(6,3)
}

TEST_CASE("characteristic arithmetic and vector embedding") {
    CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
    auto u2 = branch_point_characteristic(spec, 2);
    CHECK(u2 * 3 == RationalCharacteristic(2));
    CHECK(u2 - u2 == RationalCharacteristic(2));
    CHECK(-u2 == u2 * 2);  // order 3 element

    Mat Pi(2, 2);
    Pi << cplx(0.1, 1.0), cplx(0.0, 0.4), cplx(0.0, 0.4), cplx(-0.2, 1.1);
    Vec v = characteristic_to_vector(u2, Pi);
    cplx expect0 = cplx(1.0 / 3.0) + Pi(0, 0) * (2.0 / 3.0) + Pi(1, 0) * (2.0 / 3.0);
    CHECK(std::abs(v(0) - expect0) < 1e-14);
    Mat Pi3 = Mat::Identity(3, 3);
    CHECK_THROWS_AS(characteristic_to_vector(u2, Pi3), ConfigInvalid);
}
