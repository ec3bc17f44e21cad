#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace wrcast::fforma {

inline constexpr std::size_t kMetaFeatureCount = 9;

/// length, mean, std, acf1, acf7, trend strength, seasonal strength, skewness, cv.
using MetaFeatures = std::array<double, kMetaFeatureCount>;

inline constexpr std::array<std::string_view, kMetaFeatureCount> kMetaFeatureNames{
    "length", "mean", "std", "acf1", "acf7", "trend_strength", "seasonal_strength", "skewness", "cv"};

/// Every entry is finite; undefined statistics (constant series, too short
/// for a lag or for a period-7 decomposition) are reported as 0.
MetaFeatures meta_features(std::span<const double> series);

double autocorrelation(std::span<const double> series, std::size_t lag);

}  // namespace wrcast::fforma
