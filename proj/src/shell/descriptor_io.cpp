#include "muasp/shell/descriptor_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "muasp/asp/parser.hpp"

namespace muasp::shell {

namespace {

const char* kHeaders[] = {"program",   "activation", "stop",     "inputs",
                          "outputs",   "queries",    "retention"};

bool split_header(const std::string& line, std::string& name, std::string& rest) {
  for (const char* h : kHeaders) {
    std::string prefix = std::string(h) + ":";
    if (line.rfind(prefix, 0) == 0) {
      name = h;
      rest = line.substr(prefix.size());
      return true;
    }
  }
  return false;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool looks_like_path(const std::string& body) {
  std::string t = trim(body);
  if (t.empty() || t.find('\n') != std::string::npos) return false;
  if (t.find(' ') != std::string::npos || t.find('\t') != std::string::npos) return false;
  return t.back() != '.';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ServiceDescriptor parse_descriptor(std::string_view text, const std::string& base_dir) {
  std::map<std::string, std::string> sections;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string name, rest;
    if (split_header(line, name, rest)) {
      if (sections.count(name)) throw error("duplicate section " + name + ":");
      current = name;
      sections[name] = trim(rest).empty() ? "" : trim(rest) + "\n";
      continue;
    }
    if (current.empty()) {
      std::string t = trim(line);
      if (t.empty() || t[0] == '%') continue;
      throw error("line " + std::to_string(lineno) + " outside any section: " + t);
    }
    sections[current] += line + "\n";
  }
  if (!sections.count("program")) throw error("descriptor lacks a program: section");

  ServiceDescriptor d;
  std::string prog = sections["program"];
  if (looks_like_path(prog)) prog = read_file(base_dir + "/" + trim(prog));
  d.program = asp::parse_program(prog);

  if (sections.count("activation")) {
    std::string t = trim(sections["activation"]);
    if (!t.empty()) d.activation = asp::parse_ground_atom(t);
  }
  if (sections.count("stop")) {
    std::string t = trim(sections["stop"]);
    if (!t.empty()) d.stop = asp::parse_ground_atom(t);
  }
  if (sections.count("inputs"))
    for (const std::string& w : words(sections["inputs"])) d.inputs.insert(parse_schema(w));
  if (sections.count("outputs"))
    for (const std::string& w : words(sections["outputs"])) d.outputs.insert(parse_schema(w));
  if (sections.count("queries")) {
    std::istringstream qs(sections["queries"]);
    std::string qline;
    while (std::getline(qs, qline)) {
      std::string t = trim(qline);
      if (t.empty() || t[0] == '%') continue;
      std::size_t sp = t.find_first_of(" \t");
      if (sp == std::string::npos) throw error("query line needs 'mode atom': " + t);
      auto mode = asp::query_mode_from(t.substr(0, sp));
      if (!mode) throw error("unknown query mode: " + t.substr(0, sp));
      d.queries.push_back(Query{*mode, asp::parse_ground_atom(trim(t.substr(sp)))});
    }
  }
  if (sections.count("retention")) {
    std::vector<std::string> w = words(sections["retention"]);
    if (w.empty()) throw error("retention: needs stateless or stateful");
    if (w[0] == "stateless") {
      if (w.size() > 1) throw error("retention: stateless takes no arguments");
    } else if (w[0] == "stateful") {
      d.retention.kind = RetentionMode::STATEFUL;
      d.retention.retain.insert(w.begin() + 1, w.end());
    } else {
      throw error("retention: unknown mode " + w[0]);
    }
  }
  return d;
}

ServiceDescriptor load_descriptor_file(const std::string& path) {
  std::string dir = ".";
  auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_descriptor(read_file(path), dir);
}

std::string to_text(const ServiceDescriptor& d) {
  std::ostringstream out;
  out << "program:\n" << asp::to_string(d.program) << "\n";
  if (d.activation) out << "activation: " << asp::to_string(*d.activation) << "\n";
  if (d.stop) out << "stop: " << asp::to_string(*d.stop) << "\n";
  if (!d.inputs.empty()) {
    out << "inputs:";
    for (const Schema& s : d.inputs) out << " " << to_string(s);
    out << "\n";
  }
  if (!d.outputs.empty()) {
    out << "outputs:";
    for (const Schema& s : d.outputs) out << " " << to_string(s);
    out << "\n";
  }
  if (!d.queries.empty()) {
    out << "queries:\n";
    for (const Query& q : d.queries) out << "  " << asp::to_string(q) << "\n";
  }
  if (d.retention.kind == RetentionMode::STATEFUL) {
    out << "retention: stateful";
    for (const std::string& p : d.retention.retain) out << " " << p;
    out << "\n";
  }
  return out.str();
}

}  // namespace muasp::shell
