#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rholes {

// Dense vector over the two-element field.
class Gf2Vector {
 public:
  Gf2Vector() = default;
  explicit Gf2Vector(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const noexcept { return nbits_; }
  void flip(std::size_t k) { words_[k / 64] ^= std::uint64_t{1} << (k % 64); }
  bool test(std::size_t k) const { return (words_[k / 64] >> (k % 64)) & 1u; }
  bool none() const;
  // Index of the highest set bit; size() when zero.
  std::size_t highest() const;
  Gf2Vector& operator^=(const Gf2Vector& other);

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

// Row-echelon basis keyed by highest set bit, built incrementally.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t nbits) : nbits_(nbits), pivot_row_(nbits, kNone) {}

  // Adds v to the span; returns false when it was already dependent.
  bool insert(Gf2Vector v);
  bool contains(Gf2Vector v) const;
  std::size_t rank() const noexcept { return rows_.size(); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  void reduce(Gf2Vector& v) const;

  std::size_t nbits_;
  std::vector<std::size_t> pivot_row_;
  std::vector<Gf2Vector> rows_;
};

}  // namespace rholes
