#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "kaenmaki/error.hpp"

namespace kaenmaki {

/// A finite word over {1..d}. Symbols are 1-based.
struct Word {
  std::vector<int> symbols;

  Word() = default;
  explicit Word(std::vector<int> s) : symbols(std::move(s)) {}
  Word(std::initializer_list<int> s) : symbols(s) {}

  std::size_t size() const noexcept { return symbols.size(); }
  bool empty() const noexcept { return symbols.empty(); }
  int operator[](std::size_t k) const { return symbols[k]; }

  friend bool operator==(const Word&, const Word&) = default;
};

inline Word repeat(int symbol, std::size_t n) { return Word(std::vector<int>(n, symbol)); }

inline Word concat(const Word& u, const Word& v) {
  Word out = u;
  out.symbols.insert(out.symbols.end(), v.symbols.begin(), v.symbols.end());
  return out;
}

/// Parses "1,2,2,1".
inline Word parse_word(std::string_view text) {
  Word w;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      fail(ErrorCode::MalformedConfig, "bad word symbol '" + std::string(tok) + "'");
    w.symbols.push_back(value);
    pos = comma + 1;
  }
  return w;
}

inline std::string format_word(const std::vector<int>& symbols, char sep = ',') {
  std::string out;
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    if (k) out.push_back(sep);
    out += std::to_string(symbols[k]);
  }
  return out;
}

}  // namespace kaenmaki
