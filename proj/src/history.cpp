#include "culprit/history.hpp"

#include <atomic>
#include <thread>

#include "culprit/errors.hpp"

namespace culprit::history {

namespace {

struct Block {
  int open_line;
  int close_line;
  bool signature_like;  // header has a '(' and no leading control keyword
};

bool header_is_signature(std::string_view header) {
  if (header.find('(') == std::string_view::npos) return false;
  size_t i = 0;
  while (i < header.size() &&
         !(std::isalpha(static_cast<unsigned char>(header[i])) ||
           header[i] == '_'))
    ++i;
  size_t j = i;
  while (j < header.size() &&
         (std::isalnum(static_cast<unsigned char>(header[j])) ||
          header[j] == '_'))
    ++j;
  std::string_view word = header.substr(i, j - i);
  for (std::string_view kw : {"if", "else", "for", "while", "switch", "do",
                              "catch", "try", "return", "case"})
    if (word == kw) return false;
  return true;
}

// Brace scanner that skips comments and string/char literals and records
// every block with the header text since the previous statement boundary.
std::vector<Block> scan_blocks(std::string_view src) {
  std::vector<Block> blocks;
  struct Open {
    int line;
    std::string header;
  };
  std::vector<Open> stack;
  std::string header;
  int line = 1;
  size_t i = 0;
  const size_t n = src.size();
  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      header += ' ';
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      i = i + 1 < n ? i + 2 : n;
      continue;
    }
    if (c == '"' || c == '\'') {
      size_t j = i + 1;
      while (j < n && src[j] != c) {
        if (src[j] == '\\') ++j;
        else if (src[j] == '\n') break;  // broken literal; bail to next line
        ++j;
      }
      i = j < n ? j + 1 : n;
      header += c;
      continue;
    }
    if (c == '{') {
      stack.push_back({line, header});
      header.clear();
    } else if (c == '}') {
      if (!stack.empty()) {
        blocks.push_back({stack.back().line, line,
                          header_is_signature(stack.back().header)});
        stack.pop_back();
      }
      header.clear();
    } else if (c == ';') {
      header.clear();
    } else {
      header += c;
    }
    ++i;
  }
  return blocks;
}

}  // namespace

std::optional<LineSpan> resolve_method_span(std::string_view content,
                                            int line) {
  std::optional<LineSpan> best;
  for (const Block& b : scan_blocks(content)) {
    if (!b.signature_like) continue;
    if (!(b.open_line <= line && line <= b.close_line)) continue;
    if (!best || (b.open_line >= best->begin_line &&
                  b.close_line <= best->end_line))
      best = LineSpan{b.open_line, b.close_line};
  }
  return best;
}

LineSpan effective_span(VcsAdapter& adapter, const CodeElement& element,
                        const std::string& until) {
  if (element.enclosing_span) return *element.enclosing_span;
  if (auto content = adapter.file_at(until, element.file, until)) {
    if (auto span = resolve_method_span(*content, element.line)) return *span;
  }
  return LineSpan{element.line, element.line};
}

std::vector<CommitRef> trace_history(VcsAdapter& adapter,
                                     const CodeElement& element,
                                     const std::string& until) {
  validate(element);
  const LineSpan span = effective_span(adapter, element, until);
  return adapter.trace_span(element.file, span, until);
}

EvolveMap build_evolve_map(VcsAdapter& adapter, const ElementSet& ef,
                           const std::string& until, unsigned workers) {
  // Group elements by their effective span so each span is traced once.
  // Span resolution itself runs up front, single-threaded: the git adapter
  // caches are not safe for concurrent mutation, and the heavy part is the
  // per-span trace anyway.
  struct SpanKey {
    std::string file;
    LineSpan span;
    auto operator<=>(const SpanKey&) const = default;
  };
  std::map<SpanKey, std::vector<const CodeElement*>> groups;
  for (const CodeElement& e : ef) {
    validate(e);
    groups[SpanKey{e.file, effective_span(adapter, e, until)}].push_back(&e);
  }

  std::vector<const SpanKey*> keys;
  keys.reserve(groups.size());
  for (const auto& [key, elems] : groups) keys.push_back(&key);

  std::vector<std::vector<CommitRef>> results(keys.size());
  std::vector<std::string> failures(keys.size());

  // The serialized adapter answers from memory; threading only pays for
  // process-per-call adapters.
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (adapter.kind() != AdapterKind::GitCli) workers = 1;
  workers = std::min<unsigned>(workers, keys.size() == 0 ? 1 : keys.size());

  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= keys.size()) return;
      const SpanKey& key = *keys[i];
      try {
        results[i] = adapter.trace_span(key.file, key.span, until);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };

  // Prime the adapter's topo cache while still single-threaded; traces
  // then hit it read-only and may run concurrently (one git process per
  // call).
  if (workers > 1) adapter.all_commits(until);

  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  std::string aggregate;
  EvolveMap map;
  for (size_t i = 0; i < keys.size(); ++i) {
    if (!failures[i].empty()) {
      for (const CodeElement* e : groups[*keys[i]])
        aggregate += "  " + e->file + ":" + std::to_string(e->line) + ": " +
                     failures[i] + "\n";
      continue;
    }
    for (const CodeElement* e : groups[*keys[i]])
      map.set_history(*e, results[i]);
  }
  if (!aggregate.empty())
    throw VcsError("history mining failed for:\n" + aggregate);
  return map;
}

}  // namespace culprit::history
