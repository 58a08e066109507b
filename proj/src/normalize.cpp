#include "culprit/normalize.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "culprit/errors.hpp"

namespace culprit::style {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Longest first within each leading character; matched by maximal munch.
// Covers C, C++ and Java operators. Missing an operator only splits it
// into shorter tokens consistently on both sides of a diff, which keeps
// fingerprint equality sound as long as no two distinct source texts can
// collapse to the same sequence; every entry here exists to prevent such
// a collapse (e.g. `--` vs `- -`).
constexpr std::array<std::string_view, 28> kMultiCharOps = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->*", "<=>", "::", "->", ".*",
    "==",   "!=",  "<=",  ">=",  "<<",  ">>",  "++",  "--", "+=", "-=",
    "*=",   "/=",  "%=",  "&=",  "|=",  "^=",  "&&",  "||",
};

const char* const kControlKeywords[] = {
    "if",  "else",   "for",   "while",   "do",          "switch",
    "case", "default", "try",   "catch",   "finally",     "synchronized",
};

bool is_control_keyword(const Token& t) {
  if (t.kind != TokenKind::Identifier) return false;
  for (const char* kw : kControlKeywords)
    if (t.text == kw) return true;
  return false;
}

[[noreturn]] void refuse(const char* what, size_t offset) {
  throw culprit::ParseError(what, "offset " + std::to_string(offset));
}

}  // namespace

std::vector<Token> tokenize_c_family(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = src.size();

  auto starts_with = [&](std::string_view prefix) {
    return src.compare(i, prefix.size(), prefix) == 0;
  };

  while (i < n) {
    const char c = src[i];

    if (is_space(c)) {
      ++i;
      continue;
    }

    // Line comment.
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      i += 2;
      while (i < n && src[i] != '\n') ++i;
      continue;
    }

    // Block comment.
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      size_t end = src.find("*/", i + 2);
      if (end == std::string_view::npos) refuse("unterminated block comment", i);
      i = end + 2;
      continue;
    }

    // String / char literal, kept byte-exact including the quotes.
    if (c == '"' || c == '\'') {
      if (c == '"' && src.compare(i, 3, "\"\"\"") == 0)
        refuse("text block literal", i);
      size_t j = i + 1;
      while (j < n) {
        if (src[j] == '\\') {
          j += 2;
          continue;
        }
        if (src[j] == c) break;
        if (src[j] == '\n') refuse("unterminated literal", i);
        ++j;
      }
      if (j >= n) refuse("unterminated literal", i);
      out.push_back({TokenKind::String, std::string(src.substr(i, j + 1 - i))});
      i = j + 1;
      continue;
    }

    if (is_ident_start(c)) {
      size_t j = i + 1;
      while (j < n && is_ident_char(src[j])) ++j;
      // A raw string like R"(...)" does not obey backslash escapes; give
      // up on the whole file rather than mis-lex it.
      if (j < n && src[j] == '"' ) {
        std::string_view word = src.substr(i, j - i);
        bool raw_prefix = !word.empty() && word.back() == 'R';
        if (raw_prefix) refuse("raw string literal", i);
        // Other prefixes (L"", u8"", ...) still use backslash escapes.
      }
      out.push_back({TokenKind::Identifier, std::string(src.substr(i, j - i))});
      i = j;
      continue;
    }

    // pp-number: digits, then identifier chars, dots, and exponent signs.
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      size_t j = i + 1;
      while (j < n) {
        char d = src[j];
        if (is_ident_char(d) || d == '.') {
          ++j;
        } else if ((d == '+' || d == '-') &&
                   (src[j - 1] == 'e' || src[j - 1] == 'E' ||
                    src[j - 1] == 'p' || src[j - 1] == 'P')) {
          ++j;
        } else {
          break;
        }
      }
      out.push_back({TokenKind::Number, std::string(src.substr(i, j - i))});
      i = j;
      continue;
    }

    // Operators and punctuation, maximal munch.
    std::string_view matched;
    for (std::string_view op : kMultiCharOps) {
      if (starts_with(op)) {
        matched = op;
        break;
      }
    }
    if (!matched.empty()) {
      out.push_back({TokenKind::Punct, std::string(matched)});
      i += matched.size();
    } else {
      out.push_back({TokenKind::Punct, std::string(1, c)});
      ++i;
    }
  }
  return out;
}

namespace {

// True when the tokens strictly between a brace pair form one plain
// statement whose braces carry no meaning: exactly one `;` sitting at the
// end, no nested block, no control-flow keyword, no leading label.
bool body_is_redundant(const std::vector<Token>& tokens, size_t open,
                       size_t close) {
  if (close <= open + 1) return false;  // empty block `{}` stays
  size_t semicolons = 0;
  for (size_t k = open + 1; k < close; ++k) {
    const Token& t = tokens[k];
    if (t.kind == TokenKind::Punct && t.text == "{") return false;
    if (t.kind == TokenKind::Punct && t.text == ";") {
      ++semicolons;
      if (k != close - 1) return false;
    }
    if (is_control_keyword(t)) return false;
  }
  if (semicolons != 1) return false;
  if (tokens[open + 1].kind == TokenKind::Identifier && open + 2 < close &&
      tokens[open + 2].kind == TokenKind::Punct && tokens[open + 2].text == ":")
    return false;
  return true;
}

bool strip_once(std::vector<Token>& tokens) {
  std::vector<size_t> stack;
  for (size_t k = 0; k < tokens.size(); ++k) {
    const Token& t = tokens[k];
    if (t.kind != TokenKind::Punct) continue;
    if (t.text == "{") {
      stack.push_back(k);
    } else if (t.text == "}") {
      if (stack.empty()) return false;  // unbalanced; leave as-is
      size_t open = stack.back();
      stack.pop_back();
      if (body_is_redundant(tokens, open, k)) {
        tokens.erase(tokens.begin() + k);
        tokens.erase(tokens.begin() + open);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::vector<Token> strip_redundant_braces(std::vector<Token> tokens) {
  while (strip_once(tokens)) {
  }
  return tokens;
}

NormalizerRegistry::NormalizerRegistry() {
  for (const char* ext :
       {".c", ".h", ".cc", ".hh", ".cpp", ".hpp", ".cxx", ".hxx", ".inl",
        ".java", ".cs", ".js", ".ts", ".go", ".kt", ".scala", ".m", ".mm"})
    set(ext, Normalizer::CFamily);
}

void NormalizerRegistry::set(std::string extension, Normalizer normalizer) {
  for (auto& [ext, norm] : by_extension_) {
    if (ext == extension) {
      norm = normalizer;
      return;
    }
  }
  by_extension_.emplace_back(std::move(extension), normalizer);
}

Normalizer NormalizerRegistry::for_path(std::string_view path) const {
  size_t slash = path.find_last_of("/\\");
  std::string_view name =
      slash == std::string_view::npos ? path : path.substr(slash + 1);
  size_t dot = name.find_last_of('.');
  if (dot == std::string_view::npos || dot == 0) return Normalizer::RawBytes;
  std::string_view ext = name.substr(dot);
  for (const auto& [e, norm] : by_extension_)
    if (e == ext) return norm;
  return Normalizer::RawBytes;
}

SyntaxFingerprint fingerprint(std::string_view content, Normalizer normalizer) {
  if (normalizer == Normalizer::CFamily) {
    try {
      std::vector<Token> tokens =
          strip_redundant_braces(tokenize_c_family(content));
      std::string digest;
      for (const Token& t : tokens) {
        digest += t.text;
        // Normal literals cannot contain a raw newline, so '\n' is an
        // unambiguous separator.
        digest += '\n';
      }
      return {SyntaxFingerprint::Kind::Tokens, std::move(digest)};
    } catch (const culprit::Error&) {
      // Fall through: byte-exact comparison is always sound.
    }
  }
  return {SyntaxFingerprint::Kind::RawBytes, std::string(content)};
}

SyntaxFingerprint fingerprint_file(std::string_view path,
                                   std::string_view content,
                                   const NormalizerRegistry& registry) {
  return fingerprint(content, registry.for_path(path));
}

}  // namespace culprit::style
