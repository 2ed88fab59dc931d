#include "ktk/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "ktk/errors.hpp"
#include "ktk/rng.hpp"

namespace ktk {

Permutation::Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::uint32_t x : image_) {
    if (x >= image_.size() || seen[x]) throw DomainError("permutation image is not a bijection");
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0U);
  return Permutation(std::move(img));
}

Permutation Permutation::random(std::size_t n, RandomStream& rng) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0U);
  rng.shuffle(img);
  return Permutation(std::move(img));
}

Permutation Permutation::from_matrix(const BitMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("permutation matrix must be square");
  std::vector<std::uint32_t> img(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto supp = m.row(i).support();
    if (supp.size() != 1) throw DomainError("not a permutation matrix");
    img[i] = static_cast<std::uint32_t>(supp.front());
  }
  return Permutation(std::move(img));
}

BitMatrix Permutation::as_matrix() const {
  BitMatrix m(size(), size());
  for (std::size_t i = 0; i < size(); ++i) m.set(i, image_[i]);
  return m;
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(size());
  for (std::size_t i = 0; i < size(); ++i) inv[image_[i]] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(inv));
}

BitVector Permutation::apply(const BitVector& x) const {
  if (x.size() != size()) throw DomainError("permutation apply: length mismatch");
  BitVector out(size());
  for (std::size_t i : x.support()) out.set(image_[i]);
  return out;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw DomainError("permutation product: size mismatch");
  std::vector<std::uint32_t> img(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) img[i] = b.image_[a.image_[i]];
  return Permutation(std::move(img));
}

DiagonalSelector::DiagonalSelector(std::size_t n, std::vector<std::size_t> ones)
    : n_(n), ones_(std::move(ones)) {
  std::sort(ones_.begin(), ones_.end());
  if (std::adjacent_find(ones_.begin(), ones_.end()) != ones_.end()) {
    throw DomainError("diagonal selector indices must be distinct");
  }
  if (!ones_.empty() && ones_.back() >= n_) throw DomainError("diagonal selector index out of range");
}

DiagonalSelector DiagonalSelector::random(std::size_t n, std::size_t r, RandomStream& rng) {
  return DiagonalSelector(n, rng.sample_indices(n, r));
}

BitMatrix DiagonalSelector::as_matrix() const {
  BitMatrix m(n_, n_);
  for (std::size_t i : ones_) m.set(i, i);
  return m;
}

BitMatrix DiagonalSelector::mask_columns(const BitMatrix& m) const {
  if (m.cols() != n_) throw DomainError("diagonal selector: dimension mismatch");
  const BitVector keep = BitVector::from_support(n_, ones_);
  BitMatrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i) out.row(i) &= keep;
  return out;
}

}  // namespace ktk
