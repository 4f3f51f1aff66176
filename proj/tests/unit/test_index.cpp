#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qae/core/error.hpp"
#include "qae/core/io.hpp"
#include "qae/index/flat_index.hpp"
#include "support/oracles.hpp"

using qae::Embedding;
using qae::Errc;
using qae::index::EntryKind;
using qae::index::FlatIndex;
using qae::strategies::DocRepresentation;

namespace {

template <typename Fn>
Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const qae::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected qae::Error";
  return Errc::InvalidArgument;
}

std::vector<DocRepresentation> random_reps(std::size_t docs, std::size_t per_doc, std::size_t dim,
                                           std::mt19937_64& gen) {
  std::vector<DocRepresentation> reps;
  for (std::size_t d = 0; d < docs; ++d) {
    DocRepresentation rep{"doc" + std::to_string(d), {}};
    for (std::size_t e = 0; e < per_doc; ++e) rep.vectors.push_back(qae::testing::random_unit_vector(dim, gen));
    reps.push_back(std::move(rep));
  }
  return reps;
}

}  // namespace

TEST(FlatIndexTest, BuildCountsEntries) {
  std::mt19937_64 gen(1);
  const auto vanilla = FlatIndex::build(random_reps(3, 1, 8, gen));
  EXPECT_EQ(vanilla.entry_count(), 3u);
  EXPECT_EQ(vanilla.document_count(), 3u);
  const auto naive = FlatIndex::build(random_reps(3, 10, 8, gen), EntryKind::NaiveQuery);
  EXPECT_EQ(naive.entry_count(), 30u);
  EXPECT_EQ(naive.document_count(), 3u);
  EXPECT_EQ(naive.vector_bytes(), 30u * 8u * sizeof(float));
  EXPECT_EQ(naive.entry_kind(0), EntryKind::NaiveQuery);
}

TEST(FlatIndexTest, BuildErrors) {
  EXPECT_EQ(error_code([] { FlatIndex::build(std::vector<DocRepresentation>{}); }), Errc::EmptyIndex);
  std::vector<DocRepresentation> dup{{"a", {Embedding{1, 0}}}, {"a", {Embedding{0, 1}}}};
  EXPECT_EQ(error_code([&] { FlatIndex::build(dup); }), Errc::DuplicateDocumentId);
  std::vector<DocRepresentation> dims{{"a", {Embedding{1, 0}}}, {"b", {Embedding{0, 1, 0}}}};
  EXPECT_EQ(error_code([&] { FlatIndex::build(dims); }), Errc::DimensionMismatch);
}

TEST(FlatIndexTest, QueryEqualToStoredVectorRanksFirst) {
  std::mt19937_64 gen(2);
  const auto reps = random_reps(50, 1, 16, gen);
  const auto index = FlatIndex::build(reps);
  const auto result = index.search(reps[17].vectors[0], 5);
  ASSERT_EQ(result.size(), 5u);
  EXPECT_EQ(result[0].document_id, "doc17");
  EXPECT_NEAR(result[0].score, 1.0, 1e-6);
}

TEST(FlatIndexTest, LargeKReturnsEveryDocument) {
  std::mt19937_64 gen(3);
  const auto index = FlatIndex::build(random_reps(7, 3, 4, gen), EntryKind::NaiveQuery);
  EXPECT_EQ(index.search(Embedding{1, 0, 0, 0}, 100).size(), 7u);
}

TEST(FlatIndexTest, SearchErrors) {
  const auto index = FlatIndex::build(std::vector<DocRepresentation>{{"a", {Embedding{1, 0}}}});
  EXPECT_EQ(error_code([&] { index.search(Embedding{1, 0, 0}, 1); }), Errc::DimensionMismatch);
  EXPECT_EQ(error_code([&] { index.search(Embedding{1, 0}, 0); }), Errc::InvalidArgument);
}

TEST(FlatIndexTest, NaiveDocumentScoresMaxOverEntries) {
  // doc "n" owns entries with cosines 0.2 and 0.9 against e1; doc "s" scores 0.5.
  const auto at = [](double c) { return Embedding{c, std::sqrt(1 - c * c), 0}; };
  std::vector<DocRepresentation> reps{{"n", {at(0.2), at(0.9)}}, {"s", {at(0.5)}}};
  const auto index = FlatIndex::build(reps, EntryKind::NaiveQuery);
  const auto result = index.search(Embedding{1, 0, 0}, 10);
  ASSERT_EQ(result.size(), 2u);
  EXPECT_EQ(result[0].document_id, "n");
  EXPECT_NEAR(result[0].score, 0.9, 1e-6);
  EXPECT_EQ(result[1].document_id, "s");
  const auto brute = qae::testing::brute_search(index, Embedding{1, 0, 0}, 10);
  EXPECT_EQ(brute[0].first, "n");
  EXPECT_NEAR(brute[0].second, result[0].score, 1e-12);
}

TEST(FlatIndexTest, TiesBreakByAscendingId) {
  const Embedding v{0.6, 0.8};
  std::vector<DocRepresentation> reps{{"zeta", {v}}, {"alpha", {v}}, {"mid", {v}}, {"other", {Embedding{0, 1}}}};
  const auto index = FlatIndex::build(reps);
  const auto result = index.search(v, 3);
  ASSERT_EQ(result.size(), 3u);
  EXPECT_EQ(result[0].document_id, "alpha");
  EXPECT_EQ(result[1].document_id, "mid");
  EXPECT_EQ(result[2].document_id, "zeta");
}

TEST(FlatIndexTest, MatchesBruteForceOracle) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 2 + gen() % 64;
    const std::size_t docs = 1 + gen() % 200;
    const std::size_t per_doc = 1 + gen() % 4;
    const auto index = FlatIndex::build(random_reps(docs, per_doc, dim, gen),
                                        per_doc > 1 ? EntryKind::NaiveQuery : EntryKind::Single);
    for (int q = 0; q < 5; ++q) {
      const Embedding query = qae::testing::random_unit_vector(dim, gen);
      const std::size_t k = 1 + gen() % 20;
      const auto got = index.search(query, k);
      const auto want = qae::testing::brute_search(index, query, k);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].document_id, want[i].first);
        EXPECT_NEAR(got[i].score, want[i].second, 1e-6);
      }
    }
  }
}

TEST(FlatIndexTest, ResultsAreMonotoneAndUnique) {
  std::mt19937_64 gen(5);
  const auto index = FlatIndex::build(random_reps(100, 5, 12, gen), EntryKind::NaiveQuery);
  for (int q = 0; q < 20; ++q) {
    const auto result = index.search(qae::testing::random_unit_vector(12, gen), 100);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < result.size(); ++i) {
      EXPECT_TRUE(ids.insert(result[i].document_id).second);
      if (i > 0) {
        EXPECT_LE(result[i].score, result[i - 1].score);
      }
    }
    EXPECT_EQ(ids.size(), 100u);
  }
}

TEST(FlatIndexTest, DocumentScoresFollowInsertionOrder) {
  std::vector<DocRepresentation> reps{{"b", {Embedding{1, 0}}}, {"a", {Embedding{0, 1}}}};
  const auto scores = FlatIndex::build(reps).document_scores(Embedding{1, 0});
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_NEAR(scores[0], 1.0, 1e-12);
  EXPECT_NEAR(scores[1], 0.0, 1e-12);
}

TEST(FlatIndexPersistenceTest, RoundTripIsLossless) {
  std::mt19937_64 gen(6);
  qae::testing::TempDir dir("index");
  const auto index = FlatIndex::build(random_reps(25, 4, 9, gen), EntryKind::NaiveQuery);
  ASSERT_EQ(index.entry_count(), 100u);
  const auto path = dir / "x.qidx";
  index.save(path);
  EXPECT_EQ(std::filesystem::file_size(path), index.serialized_bytes());
  const auto loaded = FlatIndex::load(path);
  EXPECT_TRUE(loaded == index);
  for (int q = 0; q < 10; ++q) {
    const Embedding query = qae::testing::random_unit_vector(9, gen);
    EXPECT_EQ(index.search(query, 10), loaded.search(query, 10));
  }
}

TEST(FlatIndexPersistenceTest, HeaderLayout) {
  qae::testing::TempDir dir("index-layout");
  const auto index = FlatIndex::build(std::vector<DocRepresentation>{{"a", {Embedding{1.0, 0.0, 0.0}}},
                                                                     {"b", {Embedding{0.0, -1.0, 0.0}}}});
  const auto path = dir / "h.qidx";
  index.save(path);
  const std::string bytes = qae::read_file(path);
  ASSERT_EQ(bytes.size(), 32u + 2u * 3u * 4u);
  EXPECT_EQ(std::memcmp(bytes.data(), "QAEFLAT\0", 8), 0);
  const auto u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + i]);
    return v;
  };
  EXPECT_EQ(u32(8), 1u);
  EXPECT_EQ(u32(12), 3u);
  EXPECT_EQ(u32(16), 2u);
  EXPECT_EQ(u32(24), 2u);
  EXPECT_EQ(u32(32), 0x3F800000u);          // 1.0f
  EXPECT_EQ(u32(32 + 4 * 4), 0xBF800000u);  // -1.0f
  const auto sidecar = nlohmann::json::parse(qae::read_file(FlatIndex::sidecar_path(path)));
  EXPECT_EQ(sidecar.at("documents"), nlohmann::json({"a", "b"}));
  EXPECT_EQ(sidecar.at("entries").at(1).at("kind"), "single");
}

TEST(FlatIndexPersistenceTest, TruncatedFileIsRejected) {
  std::mt19937_64 gen(7);
  qae::testing::TempDir dir("index-trunc");
  const auto path = dir / "t.qidx";
  FlatIndex::build(random_reps(10, 1, 8, gen)).save(path);
  const std::string bytes = qae::read_file(path);
  for (std::size_t cut : {std::size_t{0}, std::size_t{10}, std::size_t{31}, bytes.size() - 1}) {
    qae::write_file_atomic(path, bytes.substr(0, cut));
    const Errc code = error_code([&] { FlatIndex::load(path); });
    EXPECT_TRUE(code == Errc::FormatVersionMismatch || code == Errc::IoError) << "cut=" << cut;
  }
  EXPECT_EQ(error_code([&] { FlatIndex::load(dir / "missing.qidx"); }), Errc::IoError);
}

TEST(FlatIndexPersistenceTest, WrongVersionIsRejected) {
  std::mt19937_64 gen(8);
  qae::testing::TempDir dir("index-version");
  const auto path = dir / "v.qidx";
  FlatIndex::build(random_reps(4, 1, 8, gen)).save(path);
  std::string bytes = qae::read_file(path);
  bytes[8] = 2;
  qae::write_file_atomic(path, bytes);
  EXPECT_EQ(error_code([&] { FlatIndex::load(path); }), Errc::FormatVersionMismatch);
}
