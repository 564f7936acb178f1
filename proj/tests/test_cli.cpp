#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <sstream>

#include "cli.hpp"
#include "imra/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = imra::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("imra_test_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("gen-filters") {
  const Result r = run({"gen-filters", "--order", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("h -1:1/2 0:1 1:1/2\n", 0) == 0);
  CHECK(run({"gen-filters", "--order", "17"}).code == 1);
  CHECK(run({"gen-filters", "--bogus"}).code == 1);
}

TEST_CASE("custom filters") {
  const fs::path good = scratch("good.txt");
  const fs::path bad = scratch("bad.txt");
  {
    std::ofstream(good) << "h -3:-1/16 -1:9/16 0:1 1:9/16 3:-1/16\n";
    std::ofstream(bad) << "h -1:1/2 0:1 1:1/2 2:1/8\n";
  }
  CHECK(run({"gen-filters", "--custom", good.string()}).code == 0);
  const Result r = run({"gen-filters", "--custom", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("index 2") != std::string::npos);
  fs::remove(good);
  fs::remove(bad);
}

TEST_CASE("eval-phi prints exact and decimal abscissae") {
  const Result r = run({"eval-phi", "--order", "1", "--resolution", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "-1\t-1\t0\n-1/2\t-0.5\t0.5\n0\t0\t1\n1/2\t0.5\t0.5\n1\t1\t0\n");
}

TEST_CASE("file pipeline") {
  const fs::path g = scratch("g.imra");
  const fs::path p = scratch("p");
  const fs::path t = scratch("t");
  const fs::path r = scratch("r.imra");
  CHECK(run({"sample", "--function", "gaussian", "--level", "4", "--box", "-32:32", "-o", g.string()}).code == 0);
  CHECK(run({"decompose", "-i", g.string(), "--filter", "dd2", "--levels", "3", "-o", p.string()}).code == 0);

  const Result mismatch = run({"decompose", "-i", g.string(), "--levels", "3", "--dim", "2", "-o", p.string()});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.err.find("axis") != std::string::npos);

  CHECK(run({"reconstruct", "-i", p.string(), "-o", r.string()}).code == 0);
  const auto before = imra::read_grid(g);
  const auto after = imra::read_grid(r);
  CHECK(imra::max_abs_difference(before, after, before.box()) < 1e-12);

  const Result thr = run({"threshold", "-i", p.string(), "--tau", "1e-5", "-o", t.string()});
  CHECK(thr.code == 0);
  CHECK(thr.out.find("dropped\t") != std::string::npos);

  const Result norm = run({"besov-norm", "-i", p.string(), "--sigma", "1.2", "--p", "inf", "--q", "2"});
  CHECK(norm.code == 0);
  CHECK(norm.out.find("\"p\": \"inf\"") != std::string::npos);
  CHECK(norm.out == run({"besov-norm", "-i", p.string(), "--sigma", "1.2", "--p", "inf", "--q", "2"}).out);
  CHECK(run({"besov-norm", "-i", p.string(), "--sigma", "1", "--p", "0.5"}).code == 1);

  const Result hol = run({"holder-est", "-i", g.string(), "--levels", "4"});
  CHECK(hol.code == 0);
  CHECK(hol.out.rfind("sigma\t", 0) == 0);

  CHECK(run({"reconstruct", "-i", (p / "missing").string(), "-o", r.string()}).code == 2);
  {
    std::ofstream(g, std::ios::binary) << "JUNKJUNKJUNK";
  }
  const Result junk = run({"holder-est", "-i", g.string(), "--levels", "4"});
  CHECK(junk.code == 2);
  CHECK(junk.err.find("JUNK") != std::string::npos);

  for (const auto& x : {g, p, t, r}) fs::remove_all(x);
}

TEST_CASE("ordering") {
  const Result r = run({"ordering", "--dim", "2", "--count", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "0\t0,0\n1\t0,-1\n2\t1,-1\n");
  CHECK(run({"ordering", "--dim", "3", "--verify", "3"}).code == 0);
  CHECK(run({"ordering", "--dim", "2", "--count", "3", "--verify", "2"}).code == 1);
}

TEST_CASE("verify subset") {
  const Result r = run({"verify", "--dim", "2", "--order", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS transform/") != std::string::npos);
  CHECK(r.out.find("PASS tensor/") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
}
