#include "unialg/partition.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace unialg {

namespace {

template <class Label>
Partition canonicalize(std::span<const Label> labels) {
  std::vector<std::uint32_t> canonical(labels.size());
  std::vector<std::uint32_t> relabel;
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto label = static_cast<std::size_t>(labels[i]);
    if (label >= relabel.size()) {
      relabel.resize(label + 1, kUnset);
    }
    if (relabel[label] == kUnset) {
      relabel[label] = next++;
    }
    canonical[i] = relabel[label];
  }
  return Partition::from_canonical(std::move(canonical));
}

}  // namespace

Partition Partition::identity(std::size_t n) {
  std::vector<std::uint32_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0u);
  Partition p;
  p.labels_ = std::move(labels);
  p.num_classes_ = n;
  return p;
}

Partition Partition::full(std::size_t n) {
  Partition p;
  p.labels_.assign(n, 0);
  p.num_classes_ = n == 0 ? 0 : 1;
  return p;
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  return canonicalize(labels);
}

Partition Partition::from_labels(std::span<const Element> labels) {
  return canonicalize(labels);
}

Partition Partition::from_canonical(std::vector<std::uint32_t> labels) {
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > next) {
      throw InvalidInputError("partition labels are not in canonical form at index " +
                              std::to_string(i));
    }
    if (labels[i] == next) {
      ++next;
    }
  }
  Partition p;
  p.labels_ = std::move(labels);
  p.num_classes_ = next;
  return p;
}

std::vector<std::vector<Element>> Partition::classes() const {
  std::vector<std::vector<Element>> out(num_classes_);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    out[labels_[i]].push_back(static_cast<Element>(i));
  }
  return out;
}

std::vector<Element> Partition::representatives() const {
  std::vector<Element> reps;
  reps.reserve(num_classes_);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == reps.size()) {
      reps.push_back(static_cast<Element>(i));
    }
  }
  return reps;
}

std::size_t PartitionHash::operator()(const Partition& p) const {
  std::size_t h = 1469598103934665603ull;
  for (auto label : p.labels()) {
    h = (h ^ label) * 1099511628211ull;
  }
  return h;
}

static void require_same_carrier(const Partition& a, const Partition& b) {
  if (a.carrier_size() != b.carrier_size()) {
    throw MismatchedAlgebraError("partitions on carriers of different sizes (" +
                                 std::to_string(a.carrier_size()) + " vs " +
                                 std::to_string(b.carrier_size()) + ")");
  }
}

bool refines(const Partition& a, const Partition& b) {
  require_same_carrier(a, b);
  // Canonical labels: the first element of each a-class fixes its b-label.
  std::vector<std::uint32_t> image(a.num_classes(), 0);
  std::vector<bool> seen(a.num_classes(), false);
  for (std::size_t i = 0; i < a.carrier_size(); ++i) {
    const auto ca = a.class_of(i);
    if (!seen[ca]) {
      seen[ca] = true;
      image[ca] = b.class_of(i);
    } else if (image[ca] != b.class_of(i)) {
      return false;
    }
  }
  return true;
}

Partition meet(const Partition& a, const Partition& b) {
  require_same_carrier(a, b);
  std::vector<std::size_t> labels(a.carrier_size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = static_cast<std::size_t>(a.class_of(i)) * b.num_classes() + b.class_of(i);
  }
  return Partition::from_labels(std::span<const std::size_t>(labels));
}

Partition join(const Partition& a, const Partition& b) {
  require_same_carrier(a, b);
  detail::UnionFind uf(a.carrier_size());
  std::vector<std::size_t> first_a(a.num_classes(), 0);
  std::vector<std::size_t> first_b(b.num_classes(), 0);
  for (std::size_t i = a.carrier_size(); i-- > 0;) {
    first_a[a.class_of(i)] = i;
    first_b[b.class_of(i)] = i;
  }
  for (std::size_t i = 0; i < a.carrier_size(); ++i) {
    uf.unite(i, first_a[a.class_of(i)]);
    uf.unite(i, first_b[b.class_of(i)]);
  }
  return uf.to_partition();
}

namespace detail {

UnionFind::UnionFind(std::size_t n) : parent_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) {
    return false;
  }
  // Smaller index becomes the root; keeps roots equal to class minima.
  if (b < a) {
    std::swap(a, b);
  }
  parent_[b] = a;
  return true;
}

Partition UnionFind::to_partition() {
  std::vector<std::size_t> roots(parent_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    roots[i] = find(i);
  }
  return Partition::from_labels(std::span<const std::size_t>(roots));
}

}  // namespace detail

}  // namespace unialg
