#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gel/csv_io.hpp"
#include "helpers.hpp"

using namespace gel;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "gel_unit" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("tensor column names") {
    CHECK(tensor_names("u", 2, 1) == std::vector<std::string>{"u_0", "u_1"});
    const auto c = tensor_names("C", 2, 4);
    REQUIRE(c.size() == 16);
    CHECK(c[1] == "C_0001");
    CHECK(c[6] == "C_0110");
    CHECK(tensor_names("rho", 1, 0) == std::vector<std::string>{"rho"});
}

TEST_CASE("field CSV round trip is exact") {
    const fs::path dir = scratch("csv");
    for (int dim : {1, 2}) {
        const GridSpec g = dim == 1 ? testing_support::periodic_1d(20) : testing_support::periodic_2d(9);
        testing_support::SmoothRandom rnd(3);
        Field f = rnd.field(g, 3);
        f(0, 0) = 1.0 / 3.0;
        f(1, 1) = -1e-300;
        const fs::path p = dir / ("f" + std::to_string(dim) + ".csv");
        write_field_csv(p, g, f, {"a", "b", "c"}, 0.25);
        const FieldFile back = read_field_csv(p, g);
        CHECK(back.field == f);
        CHECK(back.names == std::vector<std::string>{"a", "b", "c"});
        CHECK(back.t == 0.25);
    }
}

TEST_CASE("field CSV reader rejects mismatches") {
    const fs::path dir = scratch("csv_bad");
    const GridSpec g = testing_support::periodic_1d(16);
    write_field_csv(dir / "f.csv", g, Field(1, 16, 2.0), {"v"});
    CHECK_THROWS_AS(read_field_csv(dir / "f.csv", testing_support::periodic_1d(32)), InputError);
    CHECK_THROWS_AS(read_field_csv(dir / "missing.csv", g), InputError);
    CHECK_THROWS_AS(write_field_csv(dir / "g.csv", g, Field(2, 16), {"v"}), InputError);
    {
        std::ofstream out(dir / "f.csv", std::ios::app);
        out << "1,x\n";
    }
    CHECK_THROWS_AS(read_field_csv(dir / "f.csv", g), InputError);
}

TEST_CASE("table CSV and hashes") {
    const fs::path dir = scratch("table");
    write_table_csv(dir / "t.csv", {"a", "b"}, {{1.0, 0.1}, {2.0, 1e-17}});
    std::ifstream in(dir / "t.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "a,b\n1,0.10000000000000001\n2,1.0000000000000001e-17\n");
    CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
}
