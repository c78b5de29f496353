#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coarsedim/core/errors.hpp"

namespace coarsedim {

// Freely reduced word over a, A = a^-1, b, B = b^-1; "" is the identity.
class FreeGroupElement {
 public:
  FreeGroupElement() = default;

  // Reduces the input; rejects letters outside {a, A, b, B}.
  explicit FreeGroupElement(std::string_view letters) {
    for (char c : letters) push(c);
  }

  static constexpr char kLetters[4] = {'a', 'A', 'b', 'B'};
  static constexpr char inverse_letter(char c) noexcept { return c == 'a' ? 'A' : c == 'A' ? 'a' : c == 'b' ? 'B' : 'b'; }

  const std::string& word() const noexcept { return word_; }
  std::size_t length() const noexcept { return word_.size(); }
  bool is_identity() const noexcept { return word_.empty(); }

  FreeGroupElement operator*(const FreeGroupElement& o) const {
    FreeGroupElement out = *this;
    for (char c : o.word_) out.push(c);
    return out;
  }

  FreeGroupElement inverse() const {
    FreeGroupElement out;
    for (auto it = word_.rbegin(); it != word_.rend(); ++it) out.word_.push_back(inverse_letter(*it));
    return out;
  }

  auto operator<=>(const FreeGroupElement&) const = default;

 private:
  void push(char c) {
    if (c != 'a' && c != 'A' && c != 'b' && c != 'B')
      throw InvalidArgument(std::string("free group letter must be one of aAbB, got '") + c + "'");
    if (!word_.empty() && word_.back() == inverse_letter(c)) word_.pop_back();
    else word_.push_back(c);
  }

  std::string word_;
};

// |B(r)| in F_2 by enumerating reduced words; throws past `budget` words.
inline std::uint64_t growth_function(std::size_t r, std::uint64_t budget = 100000000) {
  std::uint64_t count = 0;
  std::string w;
  auto rec = [&](auto&& self) -> void {
    if (++count > budget) throw ResourceError("growth enumeration exceeded budget of " + std::to_string(budget));
    if (w.size() == r) return;
    for (char c : FreeGroupElement::kLetters) {
      if (!w.empty() && w.back() == FreeGroupElement::inverse_letter(c)) continue;
      w.push_back(c);
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  return count;
}

}  // namespace coarsedim
