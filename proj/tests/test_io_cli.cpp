#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "filamentlab/curve_io.hpp"
#include "filamentlab/estimates.hpp"
#include "filamentlab/kida.hpp"
#include "filamentlab/quasi_curve.hpp"
#include "filamentlab/sphere_field.hpp"

using namespace flab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("flab_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

bool no_temp_leftovers(const fs::path& dir) {
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename().string().find(".tmp") != std::string::npos) return false;
    return true;
}

} // namespace

TEST_CASE("curve CSV round trip reproduces every double") {
    TempDir dir;
    auto curve = kida::simple_helix(0.37, 0.21, 64); // nonzero pitch, irrational-ish samples
    std::string path = (dir.path / "curve.csv").string();
    write_curve_csv(path, curve);

    CHECK(fs::exists(path));
    CHECK(fs::exists(path + ".json"));
    CHECK(no_temp_leftovers(dir.path));

    auto back = read_curve_csv(path);
    CHECK(back.size() == curve.size());
    CHECK(back.period() == curve.period());
    CHECK(norm(back.pitch() - curve.pitch()) == 0.0);
    for (std::size_t j = 0; j < curve.size(); ++j)
        CHECK(norm(back.periodic_part()[j] - curve.periodic_part()[j]) == 0.0);
}

TEST_CASE("field CSV round trip reproduces every double") {
    TempDir dir;
    auto field = est::perturbed_field(SphereField::circle(128), 3e-3, 77);
    std::string path = (dir.path / "field.csv").string();
    write_field_csv(path, field);

    auto back = read_field_csv(path);
    CHECK(back.size() == field.size());
    CHECK(back.period() == field.period());
    for (std::size_t j = 0; j < field.size(); ++j)
        CHECK(norm(back[j] - field[j]) == 0.0);
    CHECK(no_temp_leftovers(dir.path));
}

TEST_CASE("atomic text writer replaces content without leftovers") {
    TempDir dir;
    std::string path = (dir.path / "note.txt").string();
    atomic_write_text(path, "first\n");
    atomic_write_text(path, "second\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "second");
    CHECK(no_temp_leftovers(dir.path));
}

TEST_CASE("reader rejects malformed input") {
    TempDir dir;
    std::string path = (dir.path / "bad.csv").string();
    atomic_write_text(path, "s,x,y,z\n0,1,2\n");
    atomic_write_text(path + ".json", "{\"period\": 6.28, \"pitch\": [0,0,0], \"N\": 1}");
    CHECK_THROWS(read_curve_csv(path));
    CHECK_THROWS(read_curve_csv((dir.path / "missing.csv").string()));
}
