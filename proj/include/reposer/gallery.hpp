#pragma once

#include "reposer/landmarks.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace reposer {

/// Image embedding vector produced offline by the extractor.
struct Embedding {
  std::vector<float> values;

  std::size_t dimension() const {
    return values.size();
  }
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

/// One exemplar image of a domain: its embedding plus the feature map and
/// landmark files that make it usable as a matching target.
struct GalleryEntry {
  Embedding embedding;
  std::filesystem::path features;
  std::filesystem::path landmarks;
};

struct Domain {
  std::string name;
  std::vector<GalleryEntry> entries;
};

/// Appearance gallery: for each facial part, a list of domains with exactly
/// `targetsPerDomain` exemplars each.
class GalleryManifest {
 public:
  /// Throws InvalidArgument if a domain does not hold exactly
  /// `targetsPerDomain` entries, DimensionMismatch if embedding sizes differ,
  /// and NonFinite / InvalidArgument for non-finite or zero embeddings.
  GalleryManifest(std::size_t targetsPerDomain, std::map<FacialPart, std::vector<Domain>> parts);

  std::size_t targetsPerDomain() const {
    return targetsPerDomain_;
  }
  /// 0 when the gallery is empty.
  std::size_t dimension() const {
    return dimension_;
  }
  const std::map<FacialPart, std::vector<Domain>>& parts() const {
    return parts_;
  }
  /// Empty span when the part has no domains.
  std::span<const Domain> domains(FacialPart part) const;

 private:
  std::size_t targetsPerDomain_;
  std::size_t dimension_ = 0;
  std::map<FacialPart, std::vector<Domain>> parts_;
};

/// Element-wise mean of the entry embeddings (order independent).
std::vector<double> meanEmbedding(const Domain& domain);

struct DomainChoice {
  std::size_t index = 0;
  double similarity = 0.0;
};

/// Domain whose mean embedding has the highest cosine similarity to `reference`;
/// ties keep the earlier domain. Throws EmptyGallery or DimensionMismatch.
DomainChoice closestDomain(const Embedding& reference, std::span<const Domain> domains);

struct PartSelection {
  FacialPart part;
  std::size_t domainIndex = 0;
  double similarity = 0.0;
  const Domain* domain = nullptr;
};

/// closestDomain for each of the five parts. Throws MissingPart(part) when a
/// reference embedding is absent and EmptyGallery when a part has no domains.
/// The returned selections point into `gallery`.
std::map<FacialPart, PartSelection>
assembleTargets(const std::map<FacialPart, Embedding>& referenceEmbeddings, const GalleryManifest& gallery);

} // namespace reposer
