#include "reposer/error.hpp"
#include "reposer/feature_map.hpp"
#include "reposer/matching.hpp"

#include "oracles.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>

using namespace reposer;

namespace {

FeatureMap oneHot(std::size_t h, std::size_t w) {
  // channel per cell, cell i hot in channel i
  const std::size_t c = h * w;
  std::vector<float> data(c * h * w, 0.0f);
  for (std::size_t i = 0; i < c; ++i) {
    data[i * c + i] = 1.0f;
  }
  return FeatureMap(c, h, w, std::move(data));
}

ErrorCode codeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

std::vector<std::size_t> allIndices() {
  std::vector<std::size_t> v(kNumLandmarks);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

} // namespace

TEST(FeatureMap, Validation) {
  EXPECT_EQ(codeOf([] { FeatureMap(0, 1, 1, {}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(codeOf([] { FeatureMap(1, 2, 2, {1, 2, 3}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(codeOf([] { FeatureMap(1, 1, 2, {1, std::numeric_limits<float>::infinity()}); }), ErrorCode::NonFinite);
  EXPECT_EQ(codeOf([] { FeatureMap(1, 1, 1, {1}, ImageSize{0, 4}); }), ErrorCode::InvalidArgument);
  const FeatureMap m(2, 1, 3, {1, 2, 3, 4, 5, 6}, ImageSize{4, 12});
  EXPECT_EQ(m.at(1, 0, 2), 6.0f);
  EXPECT_FALSE(m.atImageResolution());
  EXPECT_TRUE(m.withImageSize({1, 3}).atImageResolution());
}

TEST(Upsample, ConstantFromSingleCell) {
  const FeatureMap m(1, 1, 1, {0.75f});
  const auto up = upsampleBilinear(m, 5, 7);
  for (const float v : up.data()) {
    EXPECT_EQ(v, 0.75f);
  }
}

TEST(Upsample, IdenticalSizeIsIdentity) {
  synth::Rng rng(41);
  const auto m = synth::randomFeatureMap(rng, 3, 6, 5, {6, 5});
  const auto up = upsampleBilinear(m, 6, 5);
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    EXPECT_NEAR(up.data()[i], m.data()[i], 1e-6);
  }
}

TEST(Upsample, TwoByTwoToFourByFourMatchesOracle) {
  const FeatureMap m(1, 2, 2, {0.0f, 1.0f, 2.0f, 3.0f});
  const auto up = upsampleBilinear(m, 4, 4);
  const auto ref = oracle::upsample(m, 4, 4);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_NEAR(up.data()[i], ref.data()[i], 1e-5) << i;
  }
  // corners clamp, the interior interpolates at quarter steps
  EXPECT_NEAR(up.at(0, 0, 0), 0.0, 1e-6);
  EXPECT_NEAR(up.at(0, 0, 1), 0.25, 1e-6);
  EXPECT_NEAR(up.at(0, 1, 1), 0.75, 1e-6);
  EXPECT_NEAR(up.at(0, 3, 3), 3.0, 1e-6);
}

TEST(Upsample, RandomMapsMatchOracleAndStayInBounds) {
  synth::Rng rng(42);
  for (int t = 0; t < 30; ++t) {
    const std::size_t h = 1 + rng() % 9;
    const std::size_t w = 1 + rng() % 9;
    const std::size_t oh = 1 + rng() % 40;
    const std::size_t ow = 1 + rng() % 40;
    const auto m = synth::randomFeatureMap(rng, 2, h, w, {h, w});
    const auto up = upsampleBilinear(m, oh, ow);
    const auto ref = oracle::upsample(m, oh, ow);
    ASSERT_EQ(up.data().size(), ref.data().size());
    for (std::size_t c = 0; c < 2; ++c) {
      const auto plane = m.data().subspan(c * h * w, h * w);
      const auto [lo, hi] = std::minmax_element(plane.begin(), plane.end());
      for (std::size_t i = 0; i < oh * ow; ++i) {
        const float v = up.data()[c * oh * ow + i];
        EXPECT_NEAR(v, ref.data()[c * oh * ow + i], 1e-5);
        EXPECT_GE(v, *lo);
        EXPECT_LE(v, *hi);
      }
    }
  }
}

TEST(Upsample, LazySampleEqualsFullUpsample) {
  synth::Rng rng(43);
  const auto m = synth::randomFeatureMap(rng, 3, 5, 7, {20, 28});
  const auto up = toImageResolution(m);
  ASSERT_EQ(up.height(), 20u);
  ASSERT_EQ(up.width(), 28u);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t r = 0; r < 20; ++r) {
      for (std::size_t q = 0; q < 28; ++q) {
        EXPECT_EQ(sampleUpsampled(m, 20, 28, c, r, q), up.at(c, r, q));
      }
    }
  }
}

TEST(DescriptorAt, OneHotCorner) {
  const auto m = oneHot(3, 4);
  const auto d = descriptorAt(m, {0, 0});
  EXPECT_EQ(d.values[0], 1.0);
  EXPECT_EQ(d.norm(), 1.0);
  const auto hot = descriptorAt(m, {3, 2});
  EXPECT_EQ(hot.values[2 * 4 + 3], 1.0);
  EXPECT_EQ(hot.norm(), 1.0);
}

TEST(DescriptorAt, RoundsToNearestCell) {
  const auto m = oneHot(4, 4);
  // (1.6, 2.3) -> col 2, row 2
  EXPECT_EQ(descriptorAt(m, {1.6, 2.3}).values[2 * 4 + 2], 1.0);
  EXPECT_EQ(descriptorAt(m, {0.5, 0.5}).values[1 * 4 + 1], 1.0);
  EXPECT_EQ(descriptorAt(m, {-0.5, 3.49}).values[3 * 4 + 0], 1.0);
}

TEST(DescriptorAt, OutOfBounds) {
  const auto m = oneHot(4, 4);
  EXPECT_EQ(codeOf([&] { descriptorAt(m, {3.5, 0}); }), ErrorCode::OutOfBounds);
  EXPECT_EQ(codeOf([&] { descriptorAt(m, {0, -0.51}); }), ErrorCode::OutOfBounds);
  EXPECT_EQ(codeOf([&] { descriptorAt(m, {std::numeric_limits<double>::quiet_NaN(), 0}); }), ErrorCode::OutOfBounds);
}

TEST(AnnotatedTarget, LandmarksMustLieInsideImage) {
  synth::Rng rng(44);
  const auto m = synth::randomFeatureMap(rng, 2, 4, 4, {32, 32});
  auto face = synth::templateFace({16, 16}, 20);
  EXPECT_NO_THROW(AnnotatedTarget(m, face));
  face = synth::templateFace({16, 16}, 40);
  EXPECT_EQ(codeOf([&] { AnnotatedTarget(m, face); }), ErrorCode::OutOfBounds);
}

TEST(AverageDescriptor, SingleTargetEqualsDescriptorAt) {
  synth::Rng rng(45);
  const auto m = synth::randomFeatureMap(rng, 4, 6, 6, {24, 24});
  const auto lm = synth::randomLandmarksIn(rng, {24, 24});
  const std::vector<AnnotatedTarget> targets{AnnotatedTarget(m, lm)};
  const auto up = toImageResolution(m);
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    const Point2 p{std::min(lm[i].x, 23.0), std::min(lm[i].y, 23.0)};
    EXPECT_EQ(averageDescriptor(targets, i).values, descriptorAt(up, p).values) << i;
  }
}

TEST(AverageDescriptor, MeanOfTwo) {
  const FeatureMap a(2, 2, 2, {1, 0, 0, 0, 3, 0, 0, 0});
  const FeatureMap b(2, 2, 2, {5, 0, 0, 0, -1, 0, 0, 0});
  LandmarkSet::Points pts{};
  const LandmarkSet lm(pts);
  const std::vector<AnnotatedTarget> targets{AnnotatedTarget(a, lm), AnnotatedTarget(b, lm)};
  EXPECT_EQ(averageDescriptor(targets, 0).values, (std::vector<double>{3.0, 1.0}));
}

TEST(AverageDescriptor, PermutationGivesIdenticalResult) {
  synth::Rng rng(46);
  std::vector<AnnotatedTarget> targets;
  for (int j = 0; j < 7; ++j) {
    targets.emplace_back(synth::randomFeatureMap(rng, 5, 4, 4, {16, 16}), synth::randomLandmarksIn(rng, {16, 16}));
  }
  const auto before = averageDescriptor(targets, 30).values;
  for (int t = 0; t < 10; ++t) {
    std::shuffle(targets.begin(), targets.end(), rng);
    EXPECT_EQ(averageDescriptor(targets, 30).values, before);
  }
}

TEST(AverageDescriptor, MatchesOracle) {
  synth::Rng rng(47);
  std::vector<AnnotatedTarget> targets;
  std::vector<oracle::RawTarget> raw;
  for (int j = 0; j < 4; ++j) {
    auto m = synth::randomFeatureMap(rng, 3, 5, 6, {11, 13});
    auto lm = synth::randomLandmarksIn(rng, {11, 13});
    targets.emplace_back(m, lm);
    raw.push_back({m, lm});
  }
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    const auto mine = averageDescriptor(targets, i).values;
    const auto ref = oracle::averageDescriptor(raw, i);
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_NEAR(mine[c], ref[c], 1e-6);
    }
  }
}

TEST(AverageDescriptor, MixedShapes) {
  synth::Rng rng(48);
  const auto lm = synth::randomLandmarksIn(rng, {8, 8});
  const std::vector<AnnotatedTarget> channels{
      AnnotatedTarget(synth::randomFeatureMap(rng, 3, 4, 4, {8, 8}), lm),
      AnnotatedTarget(synth::randomFeatureMap(rng, 2, 4, 4, {8, 8}), lm)};
  EXPECT_EQ(codeOf([&] { averageDescriptor(channels, 0); }), ErrorCode::MixedShapes);
  const std::vector<AnnotatedTarget> sizes{
      AnnotatedTarget(synth::randomFeatureMap(rng, 3, 4, 4, {8, 8}), lm),
      AnnotatedTarget(synth::randomFeatureMap(rng, 3, 4, 4, {8, 9}), lm)};
  EXPECT_EQ(codeOf([&] { averageDescriptor(sizes, 0); }), ErrorCode::MixedShapes);
  EXPECT_EQ(codeOf([&] { averageDescriptor({}, 0); }), ErrorCode::InvalidArgument);
}

TEST(MatchPoint, OneHotExactMatch) {
  const auto m = oneHot(3, 3);
  Descriptor q;
  q.values.assign(9, 0.0);
  q.values[1 * 3 + 1] = 1.0;
  EXPECT_EQ(matchPoint(m, q), (Point2{1, 1}));
}

TEST(MatchPoint, TieBreakIsFirstRowMajor) {
  const FeatureMap m(2, 3, 3, std::vector<float>{1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2});
  EXPECT_EQ(matchPoint(m, {{0.3, 0.9}}), (Point2{0, 0}));
}

TEST(MatchPoint, ZeroNormCellsLose) {
  // cell 0 is zero, cell 1 is anti-parallel (distance 2 exactly), cell 3 matches
  const FeatureMap m(1, 2, 2, {0.0f, -1.0f, 0.0f, 1.0f});
  EXPECT_EQ(matchPoint(m, {{1.0}}), (Point2{1, 1}));
  const FeatureMap worst(1, 1, 2, {0.0f, -1.0f});
  // both score 2, first wins
  EXPECT_EQ(matchPoint(worst, {{1.0}}), (Point2{0, 0}));
}

TEST(MatchPoint, Errors) {
  const auto m = oneHot(2, 2);
  EXPECT_EQ(codeOf([&] { matchPoint(m, {{0, 0, 0, 0}}); }), ErrorCode::ZeroQuery);
  EXPECT_EQ(codeOf([&] { matchPoint(m, {{1, 0}}); }), ErrorCode::DimensionMismatch);
}

TEST(MatchPoint, AgreesWithExhaustiveScan) {
  synth::Rng rng(49);
  const auto m = synth::randomFeatureMap(rng, 4, 8, 8, {8, 8});
  const CosineMatcher matcher(m);
  std::normal_distribution<double> g;
  for (int t = 0; t < 1000; ++t) {
    Descriptor q;
    for (int c = 0; c < 4; ++c) {
      q.values.push_back(g(rng));
    }
    EXPECT_EQ(matcher.match(q), oracle::argminCosine(m, q.values));
  }
}

TEST(MatchLandmarks, SelfMatchingRecoversAnnotations) {
  synth::Rng rng(50);
  const auto m = synth::randomFeatureMap(rng, 6, 12, 12, {12, 12});
  const auto lm = synth::randomLandmarksIn(rng, {12, 12});
  const std::vector<AnnotatedTarget> targets{AnnotatedTarget(m, lm)};
  const auto idx = allIndices();
  const auto out = matchLandmarks(m, targets, idx);
  ASSERT_TRUE(out.complete());
  const auto set = out.toLandmarkSet();
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    const Point2 snapped{std::min(std::round(lm[i].x), 11.0), std::min(std::round(lm[i].y), 11.0)};
    EXPECT_EQ(set[i], snapped) << i;
  }
}

TEST(MatchLandmarks, PartialRequest) {
  synth::Rng rng(51);
  const auto m = synth::randomFeatureMap(rng, 3, 4, 4, {16, 16});
  const std::vector<AnnotatedTarget> targets{AnnotatedTarget(m, synth::randomLandmarksIn(rng, {16, 16}))};
  const std::vector<std::size_t> idx{48, 50, 67};
  const auto out = matchLandmarks(m, targets, idx);
  EXPECT_EQ(out.count(), 3u);
  EXPECT_FALSE(out.complete());
  EXPECT_FALSE(out.points[0].has_value());
  EXPECT_TRUE(out.points[50].has_value());
  EXPECT_EQ(codeOf([&] { out.toLandmarkSet(); }), ErrorCode::WrongCount);

  PartialLandmarks other;
  other.points[0] = Point2{1, 2};
  auto merged = out;
  merged.merge(other);
  EXPECT_EQ(merged.count(), 4u);
  EXPECT_EQ(merged.points[0], (Point2{1, 2}));
}

TEST(MatchLandmarks, AgreesWithOracleOnCoarseMaps) {
  synth::Rng rng(52);
  for (int t = 0; t < 5; ++t) {
    const ImageSize size{20, 24};
    const auto ref = synth::randomFeatureMap(rng, 5, 5, 6, size);
    std::vector<AnnotatedTarget> targets;
    std::vector<oracle::RawTarget> raw;
    for (int j = 0; j < 3; ++j) {
      auto m = synth::randomFeatureMap(rng, 5, 4, 6, size);
      auto lm = synth::randomLandmarksIn(rng, size);
      targets.emplace_back(m, lm);
      raw.push_back({m, lm});
    }
    const auto idx = allIndices();
    const auto mine = matchLandmarks(ref, targets, idx).toLandmarkSet();
    const auto expected = oracle::matchLandmarks(ref, raw, idx);
    for (std::size_t i = 0; i < kNumLandmarks; ++i) {
      EXPECT_EQ(mine[i], expected[i]) << "trial " << t << " landmark " << i;
    }
  }
}
