#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "unialg/error.hpp"

namespace unialg {

/// An equivalence relation on {0,...,n-1}, stored as class labels in
/// first-occurrence canonical form: scanning elements in order, each new
/// class receives the next unused label. Two partitions denote the same
/// relation iff their label sequences are identical.
class Partition {
 public:
  Partition() = default;

  /// Δ: every element in its own class.
  static Partition identity(std::size_t n);
  /// ∇: a single class.
  static Partition full(std::size_t n);
  /// Any labelling; relabels to canonical form.
  static Partition from_labels(std::span<const std::size_t> labels);
  static Partition from_labels(std::span<const Element> labels);
  /// Requires canonical form; throws InvalidInputError otherwise.
  static Partition from_canonical(std::vector<std::uint32_t> labels);

  std::size_t carrier_size() const { return labels_.size(); }
  std::size_t num_classes() const { return num_classes_; }
  std::uint32_t class_of(std::size_t x) const { return labels_[x]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }
  bool related(std::size_t a, std::size_t b) const { return labels_[a] == labels_[b]; }

  bool is_identity() const { return num_classes_ == labels_.size(); }
  bool is_full() const { return num_classes_ <= 1; }

  /// Classes in label order, each sorted ascending.
  std::vector<std::vector<Element>> classes() const;
  /// Least element of each class, in label order.
  std::vector<Element> representatives() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.labels_ == b.labels_;
  }
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.labels_ <=> b.labels_;
  }

 private:
  std::vector<std::uint32_t> labels_;
  std::size_t num_classes_ = 0;
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const;
};

/// True iff every class of `a` lies inside a class of `b` (a ⊆ b as relations).
/// Throws MismatchedAlgebraError on different carrier sizes.
bool refines(const Partition& a, const Partition& b);

/// Intersection of the two relations.
Partition meet(const Partition& a, const Partition& b);
/// Smallest equivalence containing both relations.
Partition join(const Partition& a, const Partition& b);

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  /// Returns true when two distinct classes were merged.
  bool unite(std::size_t a, std::size_t b);
  Partition to_partition();

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

}  // namespace unialg
