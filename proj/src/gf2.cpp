#include "rholes/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace rholes {

bool Gf2Vector::none() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

std::size_t Gf2Vector::highest() const {
  for (std::size_t w = words_.size(); w-- > 0;)
    if (words_[w]) return w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[w]));
  return nbits_;
}

Gf2Vector& Gf2Vector::operator^=(const Gf2Vector& other) {
  if (other.nbits_ != nbits_) throw std::invalid_argument("Gf2Vector: length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

void Gf2Basis::reduce(Gf2Vector& v) const {
  for (std::size_t p = v.highest(); p < nbits_; p = v.highest()) {
    if (pivot_row_[p] == kNone) return;
    v ^= rows_[pivot_row_[p]];
  }
}

bool Gf2Basis::insert(Gf2Vector v) {
  if (v.size() != nbits_) throw std::invalid_argument("Gf2Basis: length mismatch");
  reduce(v);
  if (v.none()) return false;
  pivot_row_[v.highest()] = rows_.size();
  rows_.push_back(std::move(v));
  return true;
}

bool Gf2Basis::contains(Gf2Vector v) const {
  if (v.size() != nbits_) throw std::invalid_argument("Gf2Basis: length mismatch");
  reduce(v);
  return v.none();
}

}  // namespace rholes
