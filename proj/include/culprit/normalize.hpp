#pragma once

/*
    Syntactic fingerprints of source files. A fingerprint is the token
    sequence of a file after dropping comments and inter-token whitespace
    and removing redundant braces around single statements. Two files with
    equal fingerprints are syntactically equivalent noise-level variants
    of each other; the converse does not hold.

    The default tokenizer understands the C family (C, C++, Java, and
    relatives sharing // and block comments, string/char literals with
    backslash escapes, and the usual multi-character operators). Files the
    tokenizer cannot handle confidently (raw strings, text blocks) and
    files with unknown extensions fall back to a byte-exact fingerprint,
    so every real difference in them counts as semantic.
*/

#include <string>
#include <string_view>
#include <vector>

namespace culprit::style {

enum class TokenKind {
  Identifier,
  Number,
  String,  // includes char literals, quotes and escapes kept byte-exact
  Punct,
};

struct Token {
  TokenKind kind;
  std::string text;

  friend bool operator==(const Token&, const Token&) = default;
};

// Lexes C-family source. Comments and whitespace produce no tokens.
// Throws culprit::Error(ParseError) on constructs the lexer refuses to
// normalize (unterminated literals, raw strings, text blocks).
std::vector<Token> tokenize_c_family(std::string_view source);

// Removes `{ stmt; }` brace pairs whose body is a single statement with no
// nested block, no control-flow keyword, and no leading label. Applied to
// a fixpoint.
std::vector<Token> strip_redundant_braces(std::vector<Token> tokens);

struct SyntaxFingerprint {
  enum class Kind { Tokens, RawBytes } kind = Kind::RawBytes;
  // Joined normalized token texts for Kind::Tokens, original content for
  // Kind::RawBytes.
  std::string digest;

  friend bool operator==(const SyntaxFingerprint&,
                         const SyntaxFingerprint&) = default;
};

// Which normalizer handles a file, decided by extension.
enum class Normalizer { CFamily, RawBytes };

class NormalizerRegistry {
 public:
  // Registers the default C-family extension set.
  NormalizerRegistry();

  void set(std::string extension, Normalizer normalizer);
  Normalizer for_path(std::string_view path) const;

 private:
  std::vector<std::pair<std::string, Normalizer>> by_extension_;
};

SyntaxFingerprint fingerprint(std::string_view content, Normalizer normalizer);

// Fingerprint using the registry entry for `path`'s extension.
SyntaxFingerprint fingerprint_file(std::string_view path,
                                   std::string_view content,
                                   const NormalizerRegistry& registry);

}  // namespace culprit::style
