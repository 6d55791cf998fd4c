#include "sod/parser.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace sod {

namespace {

bool valid_id(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

struct LineParser {
  std::string_view text;
  int line;
  std::size_t pos = 0;
  std::vector<Diagnostic>& errors;
  bool failed = false;

  void error(std::string msg) {
    errors.push_back({line, static_cast<int>(pos) + 1, std::move(msg)});
    failed = true;
  }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) {
      ++pos;
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  std::string_view token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t') ++pos;
    return text.substr(start, pos - start);
  }

  std::string id(std::string_view what) {
    std::size_t col = pos;
    std::string_view t = token();
    if (t.empty()) {
      error("missing " + std::string(what));
      return {};
    }
    if (!valid_id(t)) {
      pos = col;
      error("invalid " + std::string(what) + " '" + std::string(t) +
            "' (allowed: letters, digits, '_', '.', '-')");
      pos = text.size();
      return {};
    }
    return std::string(t);
  }

  std::vector<std::string> id_list(std::string_view what) {
    std::string_view t = token();
    std::vector<std::string> out;
    if (t.empty()) {
      error("missing " + std::string(what) + " list");
      return out;
    }
    std::size_t start = 0;
    while (start <= t.size()) {
      std::size_t comma = t.find(',', start);
      std::string_view item = t.substr(
          start, comma == std::string_view::npos ? comma : comma - start);
      if (!valid_id(item)) {
        error("invalid " + std::string(what) + " '" + std::string(item) +
              "' in list");
        return {};
      }
      out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

  int integer(std::string_view what) {
    std::string_view t = token();
    int value = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || p != t.data() + t.size()) {
      error("expected integer " + std::string(what) + ", got '" +
            std::string(t) + "'");
      return 0;
    }
    return value;
  }

  void finish(std::string_view stmt) {
    if (failed) return;
    if (!at_end()) {
      error("unexpected trailing tokens after " + std::string(stmt) +
            " statement");
    }
  }
};

}  // namespace

ParseResult parse_model(std::string_view text) {
  ParseResult res;
  Declarations& d = res.decls;

  int line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    std::string_view line = text.substr(
        begin, end == std::string_view::npos ? end : end - begin);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }

    LineParser lp{line, line_no, 0, res.errors};
    if (!lp.at_end()) {
      std::string_view kw = lp.token();
      if (kw == "perm") {
        PermDecl p;
        p.id = lp.id("permission id");
        p.object = lp.id("object id");
        p.operation = lp.id("operation");
        p.line = line_no;
        lp.finish(kw);
        if (!lp.failed) d.perms.push_back(std::move(p));
      } else if (kw == "user") {
        UserDecl u{lp.id("user id"), line_no};
        lp.finish(kw);
        if (!lp.failed) d.users.push_back(std::move(u));
      } else if (kw == "role") {
        RoleDecl r{lp.id("role id"), line_no};
        lp.finish(kw);
        if (!lp.failed) d.roles.push_back(std::move(r));
      } else if (kw == "ua") {
        UaDecl ua{lp.id("user id"), lp.id("role id"), line_no};
        lp.finish(kw);
        if (!lp.failed) d.ua.push_back(std::move(ua));
      } else if (kw == "pa") {
        PaDecl pa{lp.id("role id"), lp.id("permission id"), line_no};
        lp.finish(kw);
        if (!lp.failed) d.pa.push_back(std::move(pa));
      } else if (kw == "rh") {
        RhDecl rh{lp.id("senior role id"), lp.id("junior role id"), line_no};
        lp.finish(kw);
        if (!lp.failed) d.rh.push_back(std::move(rh));
      } else if (kw == "activity") {
        ActivityDecl a;
        a.id = lp.id("activity id");
        if (!lp.at_end()) a.parent = lp.id("parent activity id");
        a.line = line_no;
        lp.finish(kw);
        if (!lp.failed) d.activities.push_back(std::move(a));
      } else if (kw == "grouping") {
        GroupingDecl g;
        g.id = lp.id("grouping id");
        g.activity = lp.id("activity id");
        g.perms = lp.id_list("permission id");
        g.line = line_no;
        lp.finish(kw);
        if (!lp.failed) d.groupings.push_back(std::move(g));
      } else if (kw == "domain") {
        DomainDecl dom;
        dom.id = lp.id("domain id");
        dom.objects = lp.id_list("object id");
        dom.line = line_no;
        lp.finish(kw);
        if (!lp.failed) d.domains.push_back(std::move(dom));
      } else if (kw == "sod") {
        SodDecl s;
        s.threshold = lp.integer("threshold");
        s.activities = lp.id_list("activity id");
        s.line = line_no;
        lp.finish(kw);
        if (!lp.failed) {
          if (s.threshold < 2) {
            lp.error("sod threshold must be at least 2");
          } else if (s.threshold > static_cast<int>(s.activities.size())) {
            lp.error("sod threshold exceeds the number of listed activities");
          } else {
            d.sods.push_back(std::move(s));
          }
        }
      } else if (kw == "session") {
        SessionDecl s;
        s.id = lp.id("session id");
        s.user = lp.id("user id");
        s.roles = lp.id_list("role id");
        s.line = line_no;
        lp.finish(kw);
        if (!lp.failed) d.sessions.push_back(std::move(s));
      } else {
        lp.error("unknown statement keyword '" + std::string(kw) + "'");
      }
    }

    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return res;
}

ParseResult parse_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult res;
    res.errors.push_back({0, 0, "cannot open file: " + path});
    return res;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace sod
