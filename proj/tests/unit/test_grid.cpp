#include <doctest.h>

#include "gel/grid.hpp"

using namespace gel;

TEST_CASE("grid indexing and coordinates") {
    GridSpec g;
    g.dim = 2;
    g.n = {10, 8};
    g.dx = {0.5, 0.25};
    CHECK(g.nodes() == 80);
    CHECK(g.index(3, 2) == 23);
    CHECK(g.axis_index(23, 0) == 3);
    CHECK(g.axis_index(23, 1) == 2);
    CHECK(g.coord(23, 1) == doctest::Approx(0.5));
    CHECK(g.length(0) == doctest::Approx(5.0));
    g.bc = Boundary::fixed_displacement;
    CHECK(g.length(0) == doctest::Approx(4.5));
}

TEST_CASE("grid validation rejects bad shapes") {
    GridSpec g;
    g.n = {7, 1};
    CHECK_THROWS_AS(g.validate(), InputError);
    g.n = {16, 1};
    g.dx = {0.0, 1.0};
    CHECK_THROWS_AS(g.validate(), InputError);
    g.dx = {0.1, 1.0};
    g.memory_budget = 10;
    CHECK_THROWS_AS(g.validate(), InputError);
    g.memory_budget = 1000;
    CHECK_NOTHROW(g.validate(4));
}

TEST_CASE("tensor flattening is row major") {
    CHECK(tensor_size(2, 4) == 16);
    CHECK(idx2(2, 1, 0) == 2);
    CHECK(idx3(2, 1, 0, 1) == 5);
    CHECK(idx4(2, 1, 1, 0, 1) == 13);
}

TEST_CASE("field arithmetic and comparisons") {
    Field a(2, 4, 1.0), b(2, 4, 3.0);
    a(1, 2) = 5.0;
    const Field c = a + b;
    CHECK(c(1, 2) == 8.0);
    CHECK((b - a).max_abs() == 2.0);
    CHECK((2.0 * a)(0, 0) == 2.0);
    CHECK(max_relative_difference(a, a) == 0.0);
    CHECK_THROWS_AS(a += Field(1, 4), InputError);
    a(0, 0) = std::nan("");
    CHECK_FALSE(a.all_finite());
}

TEST_CASE("boundary names round trip") {
    for (auto bc : {Boundary::periodic, Boundary::fixed_displacement, Boundary::traction_free})
        CHECK(boundary_from_string(to_string(bc)) == bc);
    CHECK_THROWS_AS(boundary_from_string("absorbing"), InputError);
}
