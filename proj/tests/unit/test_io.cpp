#include "doctest.h"

#include <bit>
#include <charconv>
#include <filesystem>
#include <random>

#include "grades/instance_gen.hpp"
#include "grades/io.hpp"
#include "oracles.hpp"

using namespace grades;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "grades_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("instances round-trip bit-exactly") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 10; ++trial) {
    const long m = 1 + static_cast<long>(gen() % 12), n = 2 + static_cast<long>(gen() % 12);
    const auto phi = oracle::random_matrix(m, n, gen, std::pow(10.0, static_cast<double>(trial) - 5));
    const auto truth = oracle::random_sparse(n, 2, gen);
    io::InstanceRecord record{make_instance(phi, truth, 2),
                              io::GenerationInfo{"gaussian", "normal", gen(), gen(), gen()}};
    if (trial % 3 == 0) record.generation.reset();
    const auto path = scratch("inst.json");
    io::write_text_file(path, io::dump(io::to_json(record)));
    const auto back = io::read_instance(path);
    CHECK(back.instance.phi() == record.instance.phi());
    CHECK(back.instance.y() == record.instance.y());
    CHECK(*back.instance.truth() == truth);
    CHECK(back.instance.sparsity() == record.instance.sparsity());
    CHECK(back.generation == record.generation);
    CHECK(io::dump(io::to_json(back)) == io::dump(io::to_json(record)));
  }
}

TEST_CASE("instances without truth or sparsity round-trip") {
  const ProblemInstance<double> inst(MeasurementMatrix<double>::Identity(2, 3), Signal<double>::Ones(2));
  const auto back = io::instance_from_json(io::to_json(io::InstanceRecord{inst, std::nullopt}));
  CHECK_FALSE(back.instance.truth().has_value());
  CHECK_FALSE(back.instance.sparsity().has_value());
}

TEST_CASE("bounds records round-trip") {
  const auto phi = gen_gaussian_matrix(12, 15, 2);
  for (const auto& b : {exact_rip_bounds(phi, 2), sampled_rip_bounds(phi, 3, 40, 77)}) {
    const auto record = io::make_bounds_record(b, 3.25, 1e-10);
    const auto back = io::bounds_from_json(io::to_json(record));
    CHECK(back.bounds == b);
    CHECK(back.delta == record.delta);
    CHECK(back.condition_ok == record.condition_ok);
    CHECK(back.predicted_iterations == record.predicted_iterations);
    CHECK(back.y_norm_sq == 3.25);
  }
  const auto good = io::make_bounds_record(RipBounds<double>(0.9, 1.1, 4), 100.0, 0.01);
  CHECK(good.condition_ok);
  CHECK(good.predicted_iterations == std::optional<std::uint64_t>{7});
  CHECK(good.delta == doctest::Approx(0.1));
}

TEST_CASE("solve records round-trip") {
  io::SolveRecord record;
  record.result.x = Signal<double>::LinSpaced(5, -1.0, 1.0 / 3.0);
  record.result.trace = {4.0, 1.0 / 3.0, 1e-11};
  record.result.iterations = 2;
  record.result.status = SolveStatus::Converged;
  record.result.reached_target = true;
  record.result.predicted_bound = 9;
  record.mode = "certified";
  record.gamma = 1.2345678901234567;
  record.eps = 1e-10;
  record.recovery_error = 2.5e-7;
  const auto back = io::solve_from_json(io::to_json(record));
  CHECK(back.result.x == record.result.x);
  CHECK(back.result.trace == record.result.trace);
  CHECK(back.result.status == record.result.status);
  CHECK(back.result.predicted_bound == record.result.predicted_bound);
  CHECK(back.gamma == record.gamma);
  CHECK(back.recovery_error == record.recovery_error);
  CHECK(back.mode == "certified");
}

TEST_CASE("malformed documents are rejected") {
  auto doc = io::to_json(io::InstanceRecord{
      make_instance<double>(MeasurementMatrix<double>::Identity(2, 2), Signal<double>::Ones(2), 2),
      std::nullopt});
  SUBCASE("schema version") {
    doc["schema_version"] = 99;
    CHECK_THROWS_AS(io::instance_from_json(doc), io::FormatError);
  }
  SUBCASE("kind") {
    CHECK_THROWS_AS(io::bounds_from_json(doc), io::FormatError);
  }
  SUBCASE("ragged matrix") {
    doc["phi"][1].push_back(3.0);
    CHECK_THROWS_AS(io::instance_from_json(doc), io::FormatError);
  }
  SUBCASE("dimension mismatch") {
    doc["y"].push_back(1.0);
    CHECK_THROWS_AS(io::instance_from_json(doc), io::FormatError);
  }
  SUBCASE("non-numeric entry") {
    doc["y"][0] = "one";
    CHECK_THROWS_AS(io::instance_from_json(doc), io::FormatError);
  }
  SUBCASE("not json at all") {
    const auto path = scratch("garbage.json");
    io::write_text_file(path, "{not json");
    CHECK_THROWS_AS(io::read_instance(path), io::FormatError);
  }
}

TEST_CASE("I/O errors name the path") {
  const std::string missing = "/nonexistent-dir/for/sure/instance.json";
  try {
    io::read_instance(missing);
    FAIL("expected IoError");
  } catch (const io::IoError& e) {
    CHECK(std::string(e.what()).find(missing) != std::string::npos);
  }
  CHECK_THROWS_AS(io::write_text_file(missing, "x"), io::IoError);
}

TEST_CASE("trace CSV format") {
  CHECK(io::trace_csv({4.0, 0.5, 1e-12}) == "iteration,objective\n0,4\n1,0.5\n2,1e-12\n");
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 5000; ++i) {
    const double v = std::bit_cast<double>(bits(gen));
    if (!std::isfinite(v)) continue;
    const auto text = io::format_double(v);
    double back = 0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == v);
  }
}
