#include "smotenn/ingest.hpp"
#include "smotenn/io.hpp"

#include "../support/gen.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace smotenn;

TEST(Io, ResampledCsvRoundTrips) {
  const auto d = testgen::make({120, 3, 30}, RngStream(1, 0));
  ResampleSpec s;
  s.seed = 1;
  const auto r = resample(d, s);
  const auto text = resampled_csv(r);
  const auto back = parse_csv_text(text, "class", "positive");
  ASSERT_EQ(back.size(), r.output.size());
  // Columns: id, x0..x2, synthetic. Features start at column 1.
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back.row(i)(0), static_cast<double>(r.output.id(i)));
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(back.row(i)(static_cast<Eigen::Index>(j + 1)), r.output.row(i)(static_cast<Eigen::Index>(j)));
    }
    EXPECT_EQ(back.row(i)(4), r.provenance.contains(r.output.id(i)) ? 1.0 : 0.0);
    EXPECT_EQ(back.label(i), r.output.label(i));
  }
}

TEST(Io, SidecarListsEverything) {
  const auto d = testgen::make({200, 2, 50}, RngStream(2, 0));
  ResampleSpec s;
  s.seed = 2;
  const auto r = resample(d, s);
  const auto j = nlohmann::json::parse(sidecar_json(r, s));
  EXPECT_EQ(j["removed_ids"].size(), r.removed_ids.size());
  EXPECT_EQ(j["edited_ids"].size(), r.edited_ids.size());
  EXPECT_EQ(j["provenance"].size(), r.synthetic_count);
  EXPECT_EQ(j["spec"]["method"], "SMOTENN");
  const auto& first = j["provenance"][0];
  EXPECT_EQ(r.provenance.at(first["id"].get<SampleId>()).u, first["u"].get<double>());
}

TEST(Io, SpecAndManifestRoundTrip) {
  ResampleSpec s;
  s.method = Method::ENN_SMOTE;
  s.k = 7;
  s.n_oversample = 3;
  s.p_ratio = 2.5;
  s.seed = 99;
  s.engine.kind = EngineKind::SpillTree;
  s.engine.index.tau = 0.2;
  s.fixed_u = 0.25;
  const auto back = spec_from_json(spec_json(s));
  EXPECT_EQ(back.method, s.method);
  EXPECT_EQ(back.k, 7u);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.engine.kind, EngineKind::SpillTree);
  EXPECT_EQ(back.engine.index.tau, 0.2);
  EXPECT_EQ(back.fixed_u, std::optional<double>(0.25));

  RunManifest m;
  m.spec = s;
  m.input_path = "in.csv";
  m.minority_value = "yes";
  m.input_digest = 0xdeadbeefcafef00dULL;
  m.output_digest = 42;
  m.timings_ms["load"] = 1.5;
  m.before = {10, 90, 9.0};
  const auto r = RunManifest::from_json(m.to_json());
  EXPECT_EQ(r.input_digest, m.input_digest);
  EXPECT_EQ(r.output_digest, 42u);
  EXPECT_EQ(r.minority_value, m.minority_value);
  EXPECT_EQ(r.before.majority_count, 90u);
  EXPECT_EQ(r.spec.k, 7u);
  EXPECT_EQ(r.version, std::string(kVersion));
  EXPECT_THROW(RunManifest::from_json("{"), ParseError);
}

TEST(Io, Digests) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex_digest(0xabcULL), "0000000000000abc");
}
