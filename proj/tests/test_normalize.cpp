#include <doctest.h>

#include <random>

#include "culprit/errors.hpp"
#include "culprit/normalize.hpp"

using namespace culprit::style;

namespace {

std::vector<std::string> token_texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

bool tokens_equal(std::string_view a, std::string_view b) {
  return fingerprint(a, Normalizer::CFamily) ==
         fingerprint(b, Normalizer::CFamily);
}

}  // namespace

TEST_CASE("tokenizer drops comments and whitespace") {
  CHECK(tokens_equal("int a = 1; // note\n", "/* hi */int  a=1 ;"));
  CHECK(tokens_equal("a\n+\nb", "a + b"));
}

TEST_CASE("string and char literals stay byte-exact") {
  CHECK_FALSE(tokens_equal("s = \"a b\";", "s = \"a  b\";"));
  CHECK_FALSE(tokens_equal("c = ' ';", "c = '\\t';"));
  CHECK(tokens_equal("s = \"a /* not a comment */ b\";",
                     "s  =  \"a /* not a comment */ b\" ;"));
  // Escaped quote does not end the literal.
  CHECK(tokens_equal("s = \"a\\\"b\";", "s   = \"a\\\"b\";"));
}

TEST_CASE("maximal munch keeps operator boundaries semantic") {
  CHECK_FALSE(tokens_equal("a - -b;", "a -- b;"));
  CHECK_FALSE(tokens_equal("a + +b;", "a ++ b;"));
  CHECK_FALSE(tokens_equal("a >> b;", "a > > b;"));
  CHECK_FALSE(tokens_equal("x = 1e+2;", "x = 1e + 2;"));
  CHECK_FALSE(tokens_equal("ab", "a b"));
  CHECK(token_texts(tokenize_c_family("a>>>=b")) ==
        std::vector<std::string>{"a", ">>>=", "b"});
}

TEST_CASE("variable rename changes the fingerprint") {
  CHECK_FALSE(tokens_equal("int count = 0; use(count);",
                           "int total = 0; use(total);"));
}

TEST_CASE("statement reordering changes the fingerprint") {
  CHECK_FALSE(tokens_equal("a(); b();", "b(); a();"));
}

TEST_CASE("redundant braces around a single statement are removed") {
  CHECK(tokens_equal("if (x) return y;", "if (x) { return y; }"));
  CHECK(tokens_equal("while (x) step();", "while (x) { step(); }"));
  // Nested once: both collapse to the same statement.
  CHECK(tokens_equal("if (x) { { return y; } }", "if (x) return y;"));
}

TEST_CASE("braces that can change meaning are kept") {
  // Dangling else: removing the inner braces would rebind the else.
  CHECK_FALSE(tokens_equal("if (a) { if (b) x(); } else y();",
                           "if (a) if (b) x(); else y();"));
  // Two statements.
  CHECK_FALSE(tokens_equal("if (x) { a(); b(); }", "if (x) a(); b();"));
  // Initializer lists have no semicolon and stay untouched.
  CHECK_FALSE(tokens_equal("int a[] = { 1, 2 };", "int a[] = 1, 2;"));
  // Empty blocks stay.
  CHECK_FALSE(tokens_equal("void f() {}", "void f()"));
  // Labels keep their block.
  CHECK_FALSE(tokens_equal("{ retry: go(); }", "retry: go();"));
}

TEST_CASE("comment plus brace change: style-only edit") {
  // The shape of a real style-only commit: comments modified and a
  // single-statement if body wrapped in braces.
  const char* before = R"(
public class StringEscapeUtils {
    /**
     * Worker method for escaping.
     * @param str the string
     */
    private static void escapeJavaStyleString(String str, boolean flag) {
        if (str == null)
            return;
        doEscape(str, flag);
    }
}
)";
  const char* after = R"(
public class StringEscapeUtils {
    /**
     * Worker method for escaping javastyle strings.
     *
     * @param str the string to escape
     * @param flag escape single quotes too
     */
    private static void escapeJavaStyleString(String str, boolean flag) {
        if (str == null) {
            return;
        }
        doEscape(str, flag);
    }
}
)";
  CHECK(tokens_equal(before, after));
}

TEST_CASE("raw strings and text blocks fall back to byte comparison") {
  SyntaxFingerprint fp = fingerprint("auto s = R\"(x  y)\";",
                                     Normalizer::CFamily);
  CHECK(fp.kind == SyntaxFingerprint::Kind::RawBytes);
  CHECK_FALSE(tokens_equal("auto s = R\"(x y)\";", "auto s = R\"(x  y)\";"));

  SyntaxFingerprint java_block =
      fingerprint("String s = \"\"\"\nhello\n\"\"\";", Normalizer::CFamily);
  CHECK(java_block.kind == SyntaxFingerprint::Kind::RawBytes);
}

TEST_CASE("unterminated literals fall back to byte comparison") {
  SyntaxFingerprint fp = fingerprint("x = \"broken", Normalizer::CFamily);
  CHECK(fp.kind == SyntaxFingerprint::Kind::RawBytes);
}

TEST_CASE("registry picks the normalizer by extension") {
  NormalizerRegistry registry;
  CHECK(registry.for_path("src/A.java") == Normalizer::CFamily);
  CHECK(registry.for_path("deep/dir/x.cpp") == Normalizer::CFamily);
  CHECK(registry.for_path("script.py") == Normalizer::RawBytes);
  CHECK(registry.for_path("Makefile") == Normalizer::RawBytes);
  CHECK(registry.for_path(".gitignore") == Normalizer::RawBytes);
  registry.set(".py", Normalizer::CFamily);
  CHECK(registry.for_path("script.py") == Normalizer::CFamily);
}

// Soundness cross-check: when our fingerprints call a comment/whitespace
// edit equal, an independent differ that strips comments and whitespace
// character-by-character agrees there is no remaining difference.
namespace {

// Character-level normalization with no token knowledge: drop comments,
// keep literals verbatim, and drop whitespace except where it separates
// two word characters. Coarser than the tokenizer (it cannot tell `--`
// from `- -`), which is the safe direction for the implication below.
std::string strip_comments_and_space(std::string_view src) {
  std::string out;
  size_t i = 0;
  const size_t n = src.size();
  bool pending_space = false;
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  };
  auto emit = [&](char c) {
    if (pending_space && !out.empty() && is_word(out.back()) && is_word(c))
      out += '\x1f';
    pending_space = false;
    out += c;
  };
  while (i < n) {
    char c = src[i];
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      pending_space = true;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) ++i;
      i += 2;
      pending_space = true;
      continue;
    }
    if (c == '"' || c == '\'') {
      emit(c);
      ++i;
      while (i < n && src[i] != c) {
        if (src[i] == '\\' && i + 1 < n) {
          out += src[i];
          ++i;
        }
        out += src[i];
        ++i;
      }
      if (i < n) out += src[i];
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
        c == '\f') {
      pending_space = true;
      ++i;
      continue;
    }
    emit(c);
    ++i;
  }
  return out;
}

}  // namespace

TEST_CASE("fingerprint equality implies the independent differ sees no change") {
  // Pairs that differ only in comments/whitespace, plus pairs that differ
  // semantically; generated variations keep the property honest.
  std::vector<std::pair<std::string, std::string>> pairs = {
      {"int a = 1;\nint b = a + 2;\n", "int a=1; /*x*/ int b = a+2;"},
      {"void f() { g(1, 2); }", "void f(){g(1,2);} // call"},
      {"x->y = z++;", "x -> y = z ++ ;"},
      {"int a = 1;", "int a = 2;"},
      {"f(a, b);", "f(b, a);"},
  };
  std::mt19937_64 rng(7);
  for (int v = 0; v < 60; ++v) {
    std::string base = "int v" + std::to_string(v) + " = " +
                       std::to_string(v * 3) + "; call(v" +
                       std::to_string(v) + ");";
    std::string noisy;
    for (char c : base) {
      noisy += c;
      if (c == ';' || c == ')') {
        switch (rng() % 4) {
          case 0: noisy += " /* pad */ "; break;
          case 1: noisy += "\n  // end\n"; break;
          case 2: noisy += "\t"; break;
          default: break;
        }
      }
    }
    pairs.emplace_back(base, noisy);
  }

  for (const auto& [before, after] : pairs) {
    SyntaxFingerprint a = fingerprint(before, Normalizer::CFamily);
    SyntaxFingerprint b = fingerprint(after, Normalizer::CFamily);
    if (a == b) {
      CHECK(strip_comments_and_space(before) ==
            strip_comments_and_space(after));
    }
  }
}
