#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llema/crystal/structure.hpp"
#include "llema/detail/text.hpp"
#include "llema/error.hpp"

namespace llema::crystal {

namespace cif_detail {

struct Token {
  std::string text;
  std::size_t line = 0;
  bool quoted = false;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::string text_field;
  bool in_text_field = false;
  std::size_t text_field_line = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;

    // Semicolon-delimited multi-line values.
    if (!line.empty() && line.front() == ';') {
      if (in_text_field) {
        tokens.push_back({text_field, text_field_line, true});
        text_field.clear();
        in_text_field = false;
      } else {
        in_text_field = true;
        text_field_line = line_no;
        text_field = std::string(line.substr(1));
      }
      if (end == text.size()) break;
      continue;
    }
    if (in_text_field) {
      text_field += '\n';
      text_field += line;
      if (end == text.size()) break;
      continue;
    }

    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '#') break;
      if (c == '\'' || c == '"') {
        // A quote closes only when followed by whitespace or end of line.
        std::size_t j = i + 1;
        while (j < line.size() &&
               !(line[j] == c &&
                 (j + 1 == line.size() || std::isspace(static_cast<unsigned char>(line[j + 1])))))
          ++j;
        tokens.push_back({std::string(line.substr(i + 1, j - i - 1)), line_no, true});
        i = j + 1;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      tokens.push_back({std::string(line.substr(i, j - i)), line_no, false});
      i = j;
    }
    if (end == text.size()) break;
  }
  return tokens;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

inline bool is_reserved(const Token& t) {
  if (t.quoted) return false;
  const auto l = lower(t.text);
  return l.rfind("data_", 0) == 0 || l == "loop_" || l.rfind("save_", 0) == 0 ||
         l == "global_" || l == "stop_";
}

struct Value {
  std::string text;
  std::size_t line = 0;
};

struct Loop {
  std::vector<std::string> tags;
  std::vector<std::vector<Value>> rows;
};

struct Block {
  std::map<std::string, Value> items;
  std::vector<Loop> loops;

  const Loop* loop_with(const std::string& tag) const {
    for (const auto& loop : loops)
      for (const auto& t : loop.tags)
        if (t == tag) return &loop;
    return nullptr;
  }
};

// Reads the first data block; tags are lower-cased.
inline Block read_block(std::string_view text) {
  const auto tokens = tokenize(text);
  Block block;
  std::size_t i = 0;
  bool in_block = false;
  while (i < tokens.size()) {
    const auto& t = tokens[i];
    const auto l = t.quoted ? std::string() : lower(t.text);
    if (!t.quoted && l.rfind("data_", 0) == 0) {
      if (in_block) break;
      in_block = true;
      ++i;
      continue;
    }
    if (!t.quoted && l == "loop_") {
      Loop loop;
      ++i;
      while (i < tokens.size() && !tokens[i].quoted && tokens[i].text.front() == '_')
        loop.tags.push_back(lower(tokens[i++].text));
      std::vector<Value> values;
      while (i < tokens.size() && !is_reserved(tokens[i]) &&
             (tokens[i].quoted || tokens[i].text.front() != '_'))
        values.push_back({tokens[i].text, tokens[i].line}), ++i;
      if (!loop.tags.empty()) {
        for (std::size_t r = 0; r + loop.tags.size() <= values.size(); r += loop.tags.size())
          loop.rows.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(r),
                                 values.begin() + static_cast<std::ptrdiff_t>(r + loop.tags.size()));
        block.loops.push_back(std::move(loop));
      }
      continue;
    }
    if (!t.quoted && t.text.front() == '_') {
      if (i + 1 < tokens.size() && !is_reserved(tokens[i + 1]) &&
          (tokens[i + 1].quoted || tokens[i + 1].text.front() != '_')) {
        block.items[l] = {tokens[i + 1].text, tokens[i + 1].line};
        i += 2;
      } else {
        ++i;
      }
      continue;
    }
    ++i;
  }
  return block;
}

// Numeric CIF value, dropping a standard-uncertainty suffix such as "5.431(2)".
inline double number(const Value& v, const std::string& tag) {
  std::string_view s = v.text;
  if (const auto paren = s.find('('); paren != std::string_view::npos && s.back() == ')')
    s = s.substr(0, paren);
  const auto parsed = detail::parse_double(s);
  if (!parsed)
    throw Error(Errc::MalformedNumber,
                "line " + std::to_string(v.line) + ": " + tag + " = '" + v.text + "'");
  return *parsed;
}

// "Ba2+" -> "Ba", "O1" -> "O", "TI" -> "Ti".
inline std::string element_from_label(std::string_view label) {
  std::string out;
  for (char c : label) {
    if (!std::isalpha(static_cast<unsigned char>(c))) break;
    if (out.empty())
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    else if (out.size() < 2)
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else
      break;
  }
  return out;
}

}  // namespace cif_detail

// Reads the cell and atom_site loop of the first data block. Symmetry
// operations are not expanded: every site must be listed (P1).
inline Structure parse_cif(std::string_view text,
                           const chem::ElementTable& table = chem::ElementTable::builtin()) {
  using namespace cif_detail;
  const auto block = read_block(text);
  auto required = [&](const std::string& tag) -> double {
    const auto it = block.items.find(tag);
    if (it == block.items.end()) throw Error(Errc::MissingTag, tag);
    return number(it->second, tag);
  };
  const double a = required("_cell_length_a");
  const double b = required("_cell_length_b");
  const double c = required("_cell_length_c");
  const double alpha = required("_cell_angle_alpha");
  const double beta = required("_cell_angle_beta");
  const double gamma = required("_cell_angle_gamma");
  auto lattice = Lattice::make(a, b, c, alpha, beta, gamma);

  const auto* loop = block.loop_with("_atom_site_fract_x");
  if (!loop) throw Error(Errc::MissingTag, "_atom_site_fract_x");
  auto column = [&](const std::string& tag) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < loop->tags.size(); ++i)
      if (loop->tags[i] == tag) return i;
    return std::nullopt;
  };
  const auto cx = column("_atom_site_fract_x");
  const auto cy = column("_atom_site_fract_y");
  const auto cz = column("_atom_site_fract_z");
  if (!cy) throw Error(Errc::MissingTag, "_atom_site_fract_y");
  if (!cz) throw Error(Errc::MissingTag, "_atom_site_fract_z");
  auto csym = column("_atom_site_type_symbol");
  if (!csym) csym = column("_atom_site_label");
  if (!csym) throw Error(Errc::MissingTag, "_atom_site_type_symbol");

  std::vector<Site> sites;
  for (const auto& row : loop->rows) {
    const auto element = element_from_label(row[*csym].text);
    if (!table.contains(element)) throw Error(Errc::UnknownElement, row[*csym].text);
    sites.push_back(Site::make(element,
                               {number(row[*cx], "_atom_site_fract_x"),
                                number(row[*cy], "_atom_site_fract_y"),
                                number(row[*cz], "_atom_site_fract_z")},
                               table));
  }
  if (sites.empty()) throw Error(Errc::MissingTag, "_atom_site rows");

  auto source = StructureSource::generated;
  if (const auto it = block.items.find("_llema_source"); it != block.items.end())
    source = structure_source_from(it->second.text);
  return Structure::make(std::move(lattice), std::move(sites), source);
}

// Deterministic P1 CIF with 6-decimal numbers and '\n' line endings.
inline std::string write_cif(const Structure& s) {
  auto coord = [](double x) {
    auto text = detail::fixed(x);
    return text == "1.000000" ? std::string("0.000000") : text;
  };
  std::string sum;
  for (const auto& [symbol, count] : s.composition()) {
    if (!sum.empty()) sum += ' ';
    sum += symbol + std::to_string(count);
  }
  std::string out;
  out += "data_" + s.reduced_formula() + "\n";
  out += "_symmetry_space_group_name_H-M   'P 1'\n";
  out += "_symmetry_Int_Tables_number   1\n";
  out += "_chemical_formula_sum   '" + sum + "'\n";
  const auto& l = s.lattice();
  out += "_cell_length_a   " + detail::fixed(l.a()) + "\n";
  out += "_cell_length_b   " + detail::fixed(l.b()) + "\n";
  out += "_cell_length_c   " + detail::fixed(l.c()) + "\n";
  out += "_cell_angle_alpha   " + detail::fixed(l.alpha()) + "\n";
  out += "_cell_angle_beta   " + detail::fixed(l.beta()) + "\n";
  out += "_cell_angle_gamma   " + detail::fixed(l.gamma()) + "\n";
  out += "_cell_volume   " + detail::fixed(cell_volume(l)) + "\n";
  out += "_llema_source   " + std::string(to_string(s.source())) + "\n";
  out += "loop_\n";
  out += " _atom_site_label\n";
  out += " _atom_site_type_symbol\n";
  out += " _atom_site_fract_x\n";
  out += " _atom_site_fract_y\n";
  out += " _atom_site_fract_z\n";
  out += " _atom_site_occupancy\n";
  std::map<std::string, int> running;
  for (const auto& site : s.sites()) {
    const int index = running[site.element()]++;
    out += "  " + site.element() + std::to_string(index) + "  " + site.element() + "  " +
           coord(site.frac()[0]) + "  " + coord(site.frac()[1]) + "  " + coord(site.frac()[2]) +
           "  1\n";
  }
  return out;
}

}  // namespace llema::crystal
