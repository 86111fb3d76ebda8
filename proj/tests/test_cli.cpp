#include <doctest.h>

#include <filesystem>
#include <string>

#include "multipool/matrix_io.hpp"
#include "run_command.hpp"

using testing_support::run_cli;

namespace {

const std::filesystem::path kTmp(MULTIPOOL_TEST_TMP);
const std::filesystem::path kData(MULTIPOOL_TEST_DATA);

std::string tmp(const std::string& name) {
  std::filesystem::create_directories(kTmp);
  return (kTmp / name).string();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("design") {
  const auto r = run_cli("design --q 7 --m 8 -o " + tmp("d78.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "49"));
  CHECK(contains(r.out, "56"));
  CHECK(contains(r.out, "0.875"));
  CHECK(multipool::io::read_matrix(tmp("d78.json")).t() == 56);

  const auto small = run_cli("design --q 2 --m 2 --format csv -o " + tmp("d22.csv"));
  CHECK(small.exit_code == 0);
  CHECK(multipool::io::read_file(tmp("d22.csv")) == "1,0,1,0\n0,1,0,1\n1,0,0,1\n0,1,1,0\n");

  const auto bad = run_cli("design --q 7 --m 9");
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.out, "multiplicity exceeds q+1"));
  CHECK(run_cli("design --q 6 --m 2").exit_code == 2);
  CHECK(run_cli("design --q 7").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("validate") {
  CHECK(run_cli("validate " + (kData / "fano.json").string() + " --q 3 --m 3").exit_code == 0);

  // Drop the last pool of the dense CSV export.
  const auto dense = multipool::io::read_file(tmp("d78.json")).empty()
                         ? std::string()
                         : multipool::io::to_dense_csv(multipool::io::read_matrix(tmp("d78.json")));
  REQUIRE_FALSE(dense.empty());
  const auto cut = dense.substr(0, dense.rfind('\n', dense.size() - 2) + 1);
  multipool::io::write_file(tmp("cut.csv"), cut);
  const auto r = run_cli("validate " + tmp("cut.csv") + " --q 7 --m 8");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.out, "column_sum"));

  multipool::io::write_file(tmp("bad.csv"), "1,0,1\n0,2,1\n");
  const auto p = run_cli("validate " + tmp("bad.csv") + " --q 2 --m 1");
  CHECK(p.exit_code == 2);
  CHECK(contains(p.out, "line 2"));
  CHECK(run_cli("validate " + tmp("missing.json") + " --q 2 --m 1").exit_code == 2);
}

TEST_CASE("analyze") {
  const auto r = run_cli("analyze --stat sens --sweep rho --grid 0.05 --q 16 --m 4 --pfp 0.02 --pfn 0.02");
  CHECK(r.exit_code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
  CHECK(r.out.rfind("rho,sens,", 0) == 0);

  CHECK(run_cli("analyze --stat var_T_bound --grid 0.1 --pfp 0.02 -o " + tmp("v.csv")).exit_code == 1);
  CHECK(run_cli("analyze --stat var_T_bound --grid 0.01:0.1:0.01 -o " + tmp("v.csv")).exit_code == 0);
  CHECK(run_cli("analyze --stat nonsense --grid 0.1").exit_code == 2);
  CHECK(run_cli("analyze --stat sens --grid 0.1:x:1").exit_code == 2);

  const auto args = "analyze --stat typeI --sweep m --grid 1:17:1 --series rho --series-values 0.01,0.1 -o ";
  REQUIRE(run_cli(args + tmp("a.csv")).exit_code == 0);
  REQUIRE(run_cli(args + tmp("b.csv")).exit_code == 0);
  CHECK(multipool::io::read_file(tmp("a.csv")) == multipool::io::read_file(tmp("b.csv")));
}

TEST_CASE("simulate") {
  const auto r = run_cli("simulate --q 8 --m 4 --rho 0.05 --trials 2000 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "\"max_T_fn\": 0"));
  CHECK(run_cli("simulate --trials 0").exit_code == 2);
  CHECK(run_cli("simulate --q 8 --m 10").exit_code == 2);
  // The Fano plane is a (7,3,3)-multipool, so the closed forms apply to it.
  const auto fano = "--rho 0.1 --trials 2000 --matrix " + (kData / "fano.json").string();
  CHECK(run_cli("simulate --q 3 --m 3 " + fano).exit_code == 0);
  CHECK(run_cli("simulate --q 3 --m 2 " + fano).exit_code == 2);
  CHECK(run_cli("simulate --q 7 --m 8 --rho 0.05 --trials 500 --matrix " + tmp("d78.json")).exit_code == 0);
}

TEST_CASE("tune") {
  const auto r = run_cli("tune --rho 0.01 --q 10 --epsilon 0.01");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "m = 4"));
  const auto easy = run_cli("tune --rho 0.0001 --q 16 --epsilon 0.99");
  CHECK(easy.exit_code == 0);
  CHECK(contains(easy.out, "m = 1"));
  const auto hard = run_cli("tune --rho 0.2 --q 32 --epsilon 1e-9");
  CHECK(hard.exit_code == 1);
  CHECK(contains(hard.out, "raw bound"));
  CHECK(run_cli("tune --rho 0.2 --q 32 --epsilon 2").exit_code == 2);
}

}  // TEST_SUITE
