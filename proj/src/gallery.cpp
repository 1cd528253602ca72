#include "reposer/gallery.hpp"

#include "reposer/error.hpp"

#include <algorithm>
#include <cmath>

namespace reposer {

namespace {

void checkEmbedding(const Embedding& e, const std::string& where) {
  double sumSq = 0.0;
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    if (!std::isfinite(e.values[i])) {
      throw Error(ErrorCode::NonFinite, where + ": embedding value is not finite", i);
    }
    sumSq += static_cast<double>(e.values[i]) * e.values[i];
  }
  if (e.values.empty() || sumSq == 0.0) {
    throw Error(ErrorCode::InvalidArgument, where + ": embedding must be non-empty with non-zero norm");
  }
}

} // namespace

GalleryManifest::GalleryManifest(std::size_t targetsPerDomain, std::map<FacialPart, std::vector<Domain>> parts)
    : targetsPerDomain_(targetsPerDomain), parts_(std::move(parts)) {
  if (targetsPerDomain_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "gallery domains need at least one entry");
  }
  for (const auto& [part, domains] : parts_) {
    for (const auto& domain : domains) {
      const std::string where = std::string(partName(part)) + "/" + domain.name;
      if (domain.entries.size() != targetsPerDomain_) {
        throw Error(
            ErrorCode::InvalidArgument,
            where + ": expected " + std::to_string(targetsPerDomain_) + " entries",
            domain.entries.size());
      }
      for (const auto& entry : domain.entries) {
        checkEmbedding(entry.embedding, where);
        if (dimension_ == 0) {
          dimension_ = entry.embedding.dimension();
        } else if (entry.embedding.dimension() != dimension_) {
          throw Error(ErrorCode::DimensionMismatch, where + ": embedding dimension differs", entry.embedding.dimension());
        }
      }
    }
  }
}

std::span<const Domain> GalleryManifest::domains(FacialPart part) const {
  const auto it = parts_.find(part);
  if (it == parts_.end()) {
    return {};
  }
  return it->second;
}

std::vector<double> meanEmbedding(const Domain& domain) {
  if (domain.entries.empty()) {
    throw Error(ErrorCode::EmptyGallery, "domain '" + domain.name + "' has no entries");
  }
  const auto d = domain.entries.front().embedding.dimension();
  std::vector<double> mean(d, 0.0);
  std::vector<double> column(domain.entries.size());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < domain.entries.size(); ++j) {
      const auto& values = domain.entries[j].embedding.values;
      if (values.size() != d) {
        throw Error(ErrorCode::DimensionMismatch, "domain '" + domain.name + "' mixes embedding sizes", j);
      }
      column[j] = values[i];
    }
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (const double v : column) {
      sum += v;
    }
    mean[i] = sum / static_cast<double>(column.size());
  }
  return mean;
}

DomainChoice closestDomain(const Embedding& reference, std::span<const Domain> domains) {
  if (domains.empty()) {
    throw Error(ErrorCode::EmptyGallery, "no gallery domains to choose from");
  }
  double refSq = 0.0;
  for (const float v : reference.values) {
    refSq += static_cast<double>(v) * v;
  }
  const double refNorm = std::sqrt(refSq);
  if (!std::isfinite(refNorm) || refNorm == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "reference embedding must be finite with non-zero norm");
  }

  DomainChoice best{0, -2.0};
  for (std::size_t j = 0; j < domains.size(); ++j) {
    const auto mean = meanEmbedding(domains[j]);
    if (mean.size() != reference.values.size()) {
      throw Error(
          ErrorCode::DimensionMismatch,
          "reference embedding has " + std::to_string(reference.values.size()) + " values, domain '" +
              domains[j].name + "' has " + std::to_string(mean.size()),
          j);
    }
    double dot = 0.0;
    double meanSq = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      dot += reference.values[i] * mean[i];
      meanSq += mean[i] * mean[i];
    }
    // a zero mean (entries cancelling out) can never be the closest domain
    const double similarity = meanSq == 0.0 ? -2.0 : dot / (refNorm * std::sqrt(meanSq));
    if (similarity > best.similarity || j == 0) {
      best = {j, similarity};
    }
  }
  return best;
}

std::map<FacialPart, PartSelection>
assembleTargets(const std::map<FacialPart, Embedding>& referenceEmbeddings, const GalleryManifest& gallery) {
  std::map<FacialPart, PartSelection> out;
  for (const auto part : kAllParts) {
    const auto ref = referenceEmbeddings.find(part);
    if (ref == referenceEmbeddings.end()) {
      throw Error(
          ErrorCode::MissingPart,
          "no reference embedding for part '" + std::string(partName(part)) + "'",
          static_cast<std::size_t>(part));
    }
    const auto domains = gallery.domains(part);
    if (domains.empty()) {
      throw Error(
          ErrorCode::EmptyGallery,
          "gallery has no domains for part '" + std::string(partName(part)) + "'",
          static_cast<std::size_t>(part));
    }
    const auto choice = closestDomain(ref->second, domains);
    out[part] = PartSelection{part, choice.index, choice.similarity, &domains[choice.index]};
  }
  return out;
}

} // namespace reposer
