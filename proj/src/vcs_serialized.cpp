#include <fstream>
#include <sstream>

#include <json.hpp>

#include "culprit/errors.hpp"
#include "culprit/vcs.hpp"

namespace culprit::history {

using nlohmann::ordered_json;

std::vector<CommitRef> SerializedAdapter::trace_span(const std::string& file,
                                                     const LineSpan& span,
                                                     const std::string&) {
  // A serialized history is keyed by statement line; any line inside the
  // requested span that has a record answers for the whole span.
  for (int line = span.begin_line; line <= span.end_line; ++line) {
    CodeElement probe{file, line, {}};
    if (map_.has(probe)) return map_.history(probe);
  }
  throw VcsError("serialized history has no record for " + file + ":" +
                 std::to_string(span.begin_line) + "-" +
                 std::to_string(span.end_line));
}

std::vector<CommitRef> SerializedAdapter::all_commits(const std::string&) {
  std::vector<CommitRef> refs = map_.all_commits();
  std::sort(refs.begin(), refs.end(),
            [](const CommitRef& a, const CommitRef& b) { return a.key > b.key; });
  return refs;
}

bool SerializedAdapter::modifies_path(const std::string& commit,
                                      const std::string& snapshot_path,
                                      const std::string&) {
  for (const auto& [element, hist] : map_.histories()) {
    if (element.file != snapshot_path) continue;
    for (const CommitRef& ref : hist)
      if (ref.id == commit) return true;
  }
  return false;
}

CommitRecord SerializedAdapter::commit_record(const std::string& id) {
  CommitRecord record;
  record.id = id;
  record.key = map_.key_of(id);  // UnknownCommit
  return record;
}

EvolveMap parse_evolve_map(const std::string& text, const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(e.what(), origin);
  }
  if (!doc.is_object() || !doc.contains("elements") ||
      !doc["elements"].is_array())
    throw ParseError("top level must be {\"elements\": [...]}", origin);

  EvolveMap map;
  for (const auto& entry : doc["elements"]) {
    if (!entry.contains("file") || !entry.contains("line") ||
        !entry.contains("history"))
      throw ParseError("element entry needs file/line/history", origin);
    CodeElement element{entry["file"].get<std::string>(),
                        entry["line"].get<int>(), std::nullopt};
    if (entry.contains("span") && entry["span"].is_array() &&
        entry["span"].size() == 2)
      element.enclosing_span =
          LineSpan{entry["span"][0].get<int>(), entry["span"][1].get<int>()};
    std::vector<CommitRef> history;
    for (const auto& c : entry["history"]) {
      if (!c.contains("id") || !c.contains("time") || !c.contains("order"))
        throw ParseError("history entry needs id/time/order", origin);
      history.push_back(CommitRef{
          c["id"].get<std::string>(),
          CommitKey{c["time"].get<std::int64_t>(),
                    c["order"].get<std::int64_t>()}});
    }
    try {
      map.set_history(element, std::move(history));
    } catch (const Error& e) {
      throw ParseError(e.what(), origin);
    }
  }
  return map;
}

EvolveMap load_evolve_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_evolve_map(buf.str(), path.string());
}

std::string serialize_evolve_map(const EvolveMap& map) {
  ordered_json elements = ordered_json::array();
  for (const auto& [element, hist] : map.histories()) {
    ordered_json history = ordered_json::array();
    for (const CommitRef& ref : hist)
      history.push_back({{"id", ref.id},
                         {"time", ref.key.time},
                         {"order", ref.key.order}});
    ordered_json entry = {{"file", element.file},
                          {"line", element.line},
                          {"history", std::move(history)}};
    if (element.enclosing_span)
      entry["span"] = {element.enclosing_span->begin_line,
                       element.enclosing_span->end_line};
    elements.push_back(std::move(entry));
  }
  return ordered_json{{"elements", std::move(elements)}}.dump(2) + "\n";
}

void write_evolve_map(const std::filesystem::path& path, const EvolveMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing", path.string());
  out << serialize_evolve_map(map);
}

std::unique_ptr<SerializedAdapter> open_serialized(
    const std::filesystem::path& path) {
  return std::make_unique<SerializedAdapter>(load_evolve_map(path));
}

}  // namespace culprit::history
