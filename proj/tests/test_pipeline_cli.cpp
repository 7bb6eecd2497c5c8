#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cma/cli/dispatch.hpp"

using namespace cma;

namespace {

const std::string kCorpus = CMA_CORPUS_DIR;

io::json load(const std::string& rel) { return io::read_json_file(kCorpus + "/" + rel); }

PipelineRequest request(const std::string& file, std::size_t index = 0) {
  const auto doc = load(file);
  return io::request_from_json(io::Cursor(doc).at("cases").at(index).at("request"));
}

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cma::cli::cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "cma_cli_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

MatQ mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<BigRat>> r;
  for (const auto& row : rows) {
    r.emplace_back();
    for (long v : row) r.back().emplace_back(v);
  }
  return MatQ::from_rows(r);
}

}  // namespace

TEST(Pipeline, CubicEmitsTheSingleMatrix) {
  auto rep = run_pipeline(request("paper/ex5_1.json"));
  EXPECT_EQ(rep.certificate.verdict, Verdict::Ample);
  ASSERT_TRUE(rep.generators.has_value());
  ASSERT_EQ(rep.generators->torus.size(), 1U);
  EXPECT_EQ(rep.generators->torus[0].matrix, mat({{0, 0, 1}, {1, 0, -1}, {0, 1, 0}}));
  EXPECT_EQ(rep.generators->size(), 1U);
  EXPECT_TRUE(rep.sanity->ok());
  EXPECT_EQ(rep.exit_code(), 0);
  EXPECT_FALSE(rep.caveats.empty());
}

TEST(Pipeline, GaussianVerdictsAndMatrices) {
  auto no = run_pipeline(request("paper/ex5_4.json", 0));
  EXPECT_EQ(no.certificate.verdict, Verdict::NotAmple);
  EXPECT_FALSE(no.generators.has_value());
  EXPECT_EQ(no.exit_code(), 2);

  for (std::size_t k : {1U, 2U}) {
    auto yes = run_pipeline(request("paper/ex5_4.json", k));
    ASSERT_TRUE(yes.generators.has_value());
    EXPECT_EQ(yes.generators->ring(), "Z[1/5]");
    ASSERT_EQ(yes.generators->torus.size(), 1U);
    EXPECT_EQ(yes.generators->torus[0].matrix,
              MatQ::from_rows({{make_rat(4, 5), make_rat(-3, 5)}, {make_rat(3, 5), make_rat(4, 5)}}));
    ASSERT_EQ(yes.generators->torsion.size(), 1U);
    EXPECT_EQ(yes.generators->torsion[0].matrix, mat({{0, -1}, {1, 0}}));
    EXPECT_EQ(yes.generators->torsion[0].order, 4U);
    // complex conjugation has determinant -1 and there is no unit of norm -1
    EXPECT_TRUE(yes.generators->normalizer.empty());
    bool dropped = false;
    for (const auto& c : yes.caveats) dropped |= c.find("left out") != std::string::npos;
    EXPECT_TRUE(dropped);
  }
}

TEST(Pipeline, BlockEmbeddingGivesFiveGenerators) {
  auto rep = run_pipeline(request("paper/ex5_3.json"));
  ASSERT_TRUE(rep.generators.has_value());
  const auto& g = *rep.generators;
  EXPECT_EQ(g.n, 4U);
  EXPECT_EQ(g.size(), 5U);
  EXPECT_EQ(g.torsion[0].matrix, -MatQ::identity(4));
  EXPECT_EQ(g.unipotent[1].matrix, elementary_matrix(4, 2, 4));
  EXPECT_EQ(g.unipotent[1].origin, "E_{2,4}");
  // conjugating E_{i,4} by diag(g, 1) gives I + (g e_i) e_4^T
  const MatQ gh = g.torus[0].matrix;
  for (std::size_t i = 1; i <= 3; ++i) {
    const MatQ c = gh * elementary_matrix(4, i, 4) * inverse(gh);
    MatQ want = MatQ::identity(4);
    for (std::size_t r = 0; r < 3; ++r) want(r, 3) = gh(r, i - 1);
    EXPECT_EQ(c, want);
  }
}

TEST(Pipeline, QuarticNormalizerAndUnits) {
  auto rep = run_pipeline(request("paper/ex5_2.json"));
  ASSERT_TRUE(rep.generators.has_value());
  EXPECT_EQ(rep.galois[0].group, "V4");
  EXPECT_EQ(rep.torus_units->free.size(), 3U);
  EXPECT_TRUE(rep.torus_unit_certificate->valid);
  EXPECT_EQ(rep.automorphisms.size(), 4U);
  EXPECT_EQ(rep.generators->normalizer.size(), 2U);
}

TEST(Pipeline, RejectsBadRequests) {
  auto req = request("paper/ex5_1.json");
  req.unipotent_block = UnipotentBlock{5, "last-column"};
  EXPECT_THROW(run_pipeline(req), Unsupported);
  req.unipotent_block = UnipotentBlock{4, "full"};
  EXPECT_THROW(run_pipeline(req), Unsupported);

  auto g = request("paper/ex5_4.json", 1);
  g.places = PlaceSet::parse("inf,2");
  EXPECT_THROW(run_pipeline(g), RamifiedPlace);

  // a provided system that misses a generator
  auto p = request("paper/ex5_4.json", 1);
  p.units.system->free.pop_back();
  try {
    run_pipeline(p);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_EQ(e.pointer(), "/unit_source/provided/free");
  }
  // a provided element that is not a unit
  auto q = request("paper/ex5_4.json", 1);
  q.units.system->free[0] = AlgebraElement(std::vector<BigRat>{BigRat(3), BigRat(0)});
  EXPECT_THROW(run_pipeline(q), InvalidInput);
}

TEST(Pipeline, ReportIsDeterministicAndRoundTrips) {
  for (const char* f : {"paper/ex5_1.json", "paper/ex5_2.json", "paper/ex5_3.json"}) {
    const std::string a = io::dump(io::to_json(run_pipeline(request(f))));
    const std::string b = io::dump(io::to_json(run_pipeline(request(f))));
    EXPECT_EQ(a, b) << f;
    // generators re-fed through group_sanity reproduce the embedded report
    const auto doc = io::json::parse(a);
    const auto g = io::generator_set_from_json(io::Cursor(doc).at("generators"));
    EXPECT_EQ(io::to_json(group_sanity(g)).dump(), doc["sanity"].dump()) << f;
    EXPECT_EQ(io::to_json(g).dump(), doc["generators"].dump()) << f;
  }
}

TEST(Pipeline, CertificateInReportReplays) {
  auto rep = run_pipeline(request("paper/ex5_2.json"));
  EXPECT_TRUE(rep.certificate.replay());
  auto neg = run_pipeline(request("paper/ex5_4.json", 0));
  EXPECT_TRUE(neg.certificate.replay());
}

TEST(Json, ParseErrorsCarryPointers) {
  auto pointer_of = [](const std::string& text) {
    try {
      io::request_from_json(io::Cursor(io::json::parse(text)));
    } catch (const InvalidInput& e) {
      return e.pointer();
    }
    return std::string("none");
  };
  const std::string alg = R"("algebra": {"factors": [["1", "0", "1"]]})";
  EXPECT_EQ(pointer_of("{" + alg + R"(, "ambient": "XL", "places": "inf"})"), "/ambient");
  EXPECT_EQ(pointer_of("{" + alg + R"(, "ambient": "SL", "places": "inf,6"})"), "/places");
  EXPECT_EQ(pointer_of("{" + alg + R"(, "ambient": "SL", "places": "5"})"), "/places");
  EXPECT_EQ(pointer_of("{" + alg + R"(, "places": "inf"})"), "/ambient");
  EXPECT_EQ(pointer_of(R"({"algebra": {"factors": [["1", "x", "1"]]}, "ambient": "SL", "places": "inf"})"),
            "/algebra/factors/0/1");
  EXPECT_EQ(pointer_of(R"({"algebra": {"factors": [["1", "0", "1"]], "order_basis": [["1", "0"], ["0", "1/2"]]},
                          "ambient": "SL", "places": "inf"})"),
            "/algebra/order_basis");
  EXPECT_EQ(pointer_of("{" + alg + R"(, "ambient": "SL", "places": "inf", "unit_source": {"search": {"box": 0}}})"),
            "/unit_source/search/box");
  EXPECT_EQ(pointer_of("{\"schema\": \"cma/2\", " + alg + R"(, "ambient": "SL", "places": "inf"})"), "/schema");
  EXPECT_EQ(pointer_of("{" + alg + R"(, "ambient": "SL", "places": "inf",
      "unit_source": {"provided": {"torsion": [{"element": ["0"], "order": 4}], "free": []}}})"),
            "/unit_source/provided/torsion/0/element");
}

TEST(Json, MatrixSerializationIsCanonical) {
  MatQ m = MatQ::from_rows({{make_rat(4, 5), BigRat(-3)}, {make_rat(6, 4), BigRat(0)}});
  EXPECT_EQ(io::to_json(m).dump(), R"([["4/5","-3"],["3/2","0"]])");
  const auto back = io::matrix_from_json(io::Cursor(io::json::parse(R"([["8/10", "-3"], ["3/2", 0]])")));
  EXPECT_EQ(back, m);
  EXPECT_THROW(io::matrix_from_json(io::Cursor(io::json::parse(R"([["1", "2"], ["3"]])"))), InvalidInput);
  EXPECT_THROW(io::matrix_from_json(io::Cursor(io::json::parse(R"([["1/0"]])"))), InvalidInput);
}

TEST(GoldenCorpus, FreshCorpusPasses) {
  auto rows = verify_paper_examples(kCorpus + "/paper");
  ASSERT_EQ(rows.size(), 4U);
  for (const auto& r : rows) EXPECT_TRUE(r.passed) << r.example << ": " << (r.diffs.empty() ? "" : r.diffs[0]);
  EXPECT_EQ(rows[0].example, "5.1");
  EXPECT_EQ(rows[3].example, "5.4");
}

TEST(GoldenCorpus, CorruptedPolynomialFailsWithDiff) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "cma_corrupt_corpus";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& ent : fs::directory_iterator(kCorpus + "/paper")) fs::copy(ent.path(), dir / ent.path().filename());
  auto doc = load("paper/ex5_1.json");
  doc["cases"][0]["request"]["algebra"]["factors"][0][1] = "2";  // x^3 + 2x - 1
  std::ofstream(dir / "ex5_1.json") << doc.dump(2);
  auto rows = verify_paper_examples(dir.string());
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_FALSE(rows[0].passed);
  ASSERT_FALSE(rows[0].diffs.empty());
  EXPECT_NE(rows[0].diffs[0].find("torus[0]"), std::string::npos) << rows[0].diffs[0];
  for (std::size_t i = 1; i < 4; ++i) EXPECT_TRUE(rows[i].passed);
}

TEST(Cli, CheckAmpleExitCodes) {
  const std::string g = kCorpus + "/algebras/gaussian.json";
  auto yes = run_cli({"check-ample", "--algebra", g, "--ambient", "SL", "--places", "inf,5", "--json"});
  EXPECT_EQ(yes.code, 0);
  auto j = io::json::parse(yes.out);
  EXPECT_EQ(j["schema"], "cma/1");
  EXPECT_EQ(j["certificate"]["verdict"], "S-ample");
  auto no = run_cli({"check-ample", "--algebra", g, "--places", "inf"});
  EXPECT_EQ(no.code, 2);
  EXPECT_NE(no.out.find("not-S-ample"), std::string::npos);
  auto ram = run_cli({"check-ample", "--algebra", g, "--places", "inf,2", "--json"});
  EXPECT_EQ(ram.code, 1);
  EXPECT_EQ(io::json::parse(ram.out)["error"]["kind"], "ramified_place");
}

TEST(Cli, LocalRankAndUnits) {
  auto r = run_cli({"local-rank", "--algebra", kCorpus + "/algebras/cubic.json", "--place", "inf"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1\n");
  auto g5 = run_cli({"local-rank", "--algebra", kCorpus + "/algebras/gaussian.json", "--place", "5", "--json"});
  EXPECT_EQ(io::json::parse(g5.out)["local_rank"], 1);
  auto bad = run_cli({"local-rank", "--algebra", kCorpus + "/algebras/gaussian.json", "--place", "2"});
  EXPECT_EQ(bad.code, 1);

  auto u = run_cli({"units", "--algebra", kCorpus + "/algebras/gaussian.json", "--primes", "5", "--json"});
  EXPECT_EQ(u.code, 0);
  auto uj = io::json::parse(u.out);
  EXPECT_EQ(uj["certificate"]["rank"], 2);
  EXPECT_TRUE(uj["certificate"]["valid"].get<bool>());
  // feed the system back for verification
  const auto path = write_temp("units.json", uj["units"].dump());
  auto v = run_cli({"units", "--algebra", kCorpus + "/algebras/gaussian.json", "--verify", path});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("certified"), std::string::npos);
  const auto bogus = write_temp("bogus.json", R"({"s_primes": [5], "torsion": [{"element": ["0", "1"], "order": 2}],
                                                 "free": [["2", "1"], ["2", "-1"]]})");
  EXPECT_EQ(run_cli({"units", "--algebra", kCorpus + "/algebras/gaussian.json", "--verify", bogus}).code, 1);
}

TEST(Cli, ConstructIsByteIdentical) {
  const std::string doc = load("paper/ex5_3.json")["cases"][0]["request"].dump();
  const auto path = write_temp("req53.json", doc);
  auto a = run_cli({"construct", "--request", path, "--json"});
  auto b = run_cli({"construct", "--request", path, "--json"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto t = run_cli({"construct", "--request", path});
  EXPECT_NE(t.out.find("unipotent (E_{3,4})"), std::string::npos);

  const std::string neg = load("paper/ex5_4.json")["cases"][0]["request"].dump();
  EXPECT_EQ(run_cli({"construct", "--request", write_temp("req54.json", neg)}).code, 2);
}

TEST(Cli, ErrorsAndUsage) {
  auto missing = run_cli({"construct", "--request", "/nonexistent.json", "--json"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(io::json::parse(missing.out)["error"]["kind"], "invalid_input");

  const auto bad = write_temp("bad.json", R"({"algebra": {"factors": [["1", "0", "1"]]}, "ambient": "SL",
                                              "places": ["inf", "x"]})");
  auto b = run_cli({"construct", "--request", bad, "--json"});
  EXPECT_EQ(b.code, 1);
  EXPECT_EQ(io::json::parse(b.out)["error"]["pointer"], "/places");

  const auto junk = write_temp("junk.json", "{ not json");
  EXPECT_EQ(run_cli({"construct", "--request", junk}).code, 1);

  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);

  setenv("CMA_PRECISION_CAP", "12", 1);
  auto capped = run_cli({"local-rank", "--algebra", kCorpus + "/algebras/cubic.json", "--place", "inf"});
  unsetenv("CMA_PRECISION_CAP");
  EXPECT_EQ(capped.code, 1);
  EXPECT_NE(capped.err.find("CMA_PRECISION_CAP"), std::string::npos);
}

TEST(Cli, VerifyPaper) {
  auto r = run_cli({"verify-paper", "--json"});
  EXPECT_EQ(r.code, 0);
  auto j = io::json::parse(r.out);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  EXPECT_EQ(j["examples"].size(), 4U);
  EXPECT_EQ(run_cli({"verify-paper", "--corpus", "/nonexistent"}).code, 1);
}
