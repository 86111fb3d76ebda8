#include <doctest.h>

#include <filesystem>
#include <string>

#include "multipool/design.hpp"
#include "multipool/errors.hpp"
#include "multipool/matrix_io.hpp"

using namespace multipool;

TEST_SUITE("matrix_io") {

TEST_CASE("JSON round trip keeps pools, labels and parameters") {
  for (auto [q, m] : {std::pair{2u, 2u}, {7u, 8u}, {9u, 10u}, {16u, 3u}}) {
    const auto a = build_multipool({q, m});
    const auto text = io::to_json(a);
    const auto b = io::matrix_from_json(text);
    CHECK(b == a);
    CHECK(io::to_json(b) == text);
  }
}

TEST_CASE("JSON without q and m") {
  const auto a = io::read_matrix(std::filesystem::path(MULTIPOOL_TEST_DATA) / "fano.json");
  CHECK(a.n() == 7);
  CHECK(a.t() == 7);
  CHECK_FALSE(a.declared_q().has_value());
  CHECK(a.labels().empty());
  CHECK(validate_multipool(a, 3, 3).is_multipool);
}

TEST_CASE("malformed JSON reports a position") {
  const std::string bad = "{\n  \"format_version\": 1,\n  \"n\": 3,\n  \"pools\": [[0, 1],, [2]]\n}\n";
  try {
    io::matrix_from_json(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(io::matrix_from_json(R"({"format_version": 2, "n": 1, "pools": [[0]]})"), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(R"({"format_version": 1, "n": 2, "pools": [[0, 5]]})"), ParseError);
}

TEST_CASE("dense CSV round trip") {
  const auto a = build_multipool({3, 4});
  const auto csv = io::to_dense_csv(a);
  CHECK(csv.substr(0, 18) == "1,0,0,1,0,0,1,0,0\n");
  const auto b = io::matrix_from_dense_csv(csv);
  CHECK(b.pools() == a.pools());
  CHECK(io::to_dense_csv(b) == csv);
}

TEST_CASE("dense CSV rejects non-binary entries with line and column") {
  try {
    io::matrix_from_dense_csv("1,0,1\n0,2,1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  CHECK_THROWS_AS(io::matrix_from_dense_csv("1,0,1\n0,1\n"), ParseError);
  CHECK_THROWS_AS(io::matrix_from_dense_csv("1,x\n"), ParseError);
}

TEST_CASE("files in both formats") {
  const std::filesystem::path dir(MULTIPOOL_TEST_TMP);
  std::filesystem::create_directories(dir);
  const auto a = build_multipool({5, 3});
  io::write_matrix(dir / "m.json", a, io::MatrixFormat::Json);
  io::write_matrix(dir / "m.csv", a, io::MatrixFormat::Csv);
  CHECK(io::read_matrix(dir / "m.json") == a);
  CHECK(io::read_matrix(dir / "m.csv").pools() == a.pools());
  CHECK_THROWS_AS(io::read_matrix(dir / "missing.json"), Error);
}

}  // TEST_SUITE
