#include "muasp/mcs/system_io.hpp"

#include <fstream>
#include <sstream>

#include "muasp/asp/grounder.hpp"
#include "muasp/asp/parser.hpp"
#include "muasp/mcs/agent_context.hpp"
#include "muasp/shell/descriptor_io.hpp"

namespace muasp::mcs {

namespace {

std::string trim(std::string s) {
  auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string strip_dot(std::string s, const std::string& what) {
  if (s.empty() || s.back() != '.') {
    throw error(what + " must end with '.': " + s);
  }
  s.pop_back();
  return trim(std::move(s));
}

// top-level comma split, parens kept balanced
std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

ContextRef parse_ref(const std::string& token) {
  if (auto d = parse_designator(token)) return ContextRef{{}, *d};
  if (!msg::valid_component_name(token)) {
    throw error("bad context reference: " + token);
  }
  return ContextRef{token, std::nullopt};
}

BridgeHead parse_head(const std::string& text) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos ||
      close != text.size() - 1 || open == 0) {
    throw error("bridge head must read op(atom): " + text);
  }
  std::string op = trim(text.substr(0, open));
  std::string inner = trim(text.substr(open + 1, close - open - 1));
  return BridgeHead{op, asp::parse_atom(inner)};
}

BridgeRule parse_bridge(const std::string& line) {
  std::string text = strip_dot(line, "bridge rule");
  auto arrow = text.find("<-");
  if (arrow == std::string::npos) {
    throw error("bridge rule needs '<-': " + line);
  }
  std::string left = trim(text.substr(0, arrow));
  std::string right = trim(text.substr(arrow + 2));
  auto colon = left.find(':');
  if (colon == std::string::npos) {
    throw error("bridge rule needs 'dest:': " + line);
  }
  BridgeRule r;
  r.dest = trim(left.substr(0, colon));
  if (r.dest.empty()) throw error("bridge rule needs a dest: " + line);
  parse_designator(r.dest);  // validates the designator spelling if present
  r.head = parse_head(trim(left.substr(colon + 1)));
  for (const std::string& item : split_commas(right)) {
    if (item.size() < 2 || item.front() != '(' || item.back() != ')') {
      throw error("bridge body literal must be parenthesized: " + item);
    }
    std::string body = trim(item.substr(1, item.size() - 2));
    auto c = body.find(':');
    if (c == std::string::npos) {
      throw error("bridge body literal must read (ref: atom): " + item);
    }
    BridgeLit lit;
    lit.ref = parse_ref(trim(body.substr(0, c)));
    lit.atom = asp::parse_atom(trim(body.substr(c + 1)));
    r.body.push_back(std::move(lit));
  }
  if (r.body.empty()) throw error("bridge rule needs a body: " + line);
  return r;
}

void parse_at(const std::string& line, Schedule& schedule) {
  std::string text = strip_dot(line, "schedule entry");
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw error("schedule entry must read at T: ctx op atom.: " + line);
  }
  int t = 0;
  try {
    t = std::stoi(trim(text.substr(0, colon)));
  } catch (const std::exception&) {
    throw error("bad schedule time: " + line);
  }
  std::istringstream rest(text.substr(colon + 1));
  std::string ctx, op;
  rest >> ctx >> op;
  std::string atom_text;
  std::getline(rest, atom_text);
  atom_text = trim(atom_text);
  if (ctx.empty() || atom_text.empty() ||
      (op != "add" && op != "del" && op != "replace")) {
    throw error("schedule entry must read at T: ctx op atom.: " + line);
  }
  schedule[t].push_back(
      Update{ctx, BridgeHead{op, asp::parse_ground_atom(atom_text)}});
}

}  // namespace

SystemSpec parse_system(std::string_view text, const std::string& base_dir) {
  SystemSpec spec;
  spec.base_dir = base_dir;
  ContextSpec* open = nullptr;
  std::map<std::string, std::string> fact_text;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    if (auto cut = raw.find('%'); cut != std::string::npos) raw.erase(cut);
    std::string line = trim(raw);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    std::string rest = trim(line.substr(kw.size()));
    if (kw == "horizon") {
      try {
        spec.horizon = std::stoi(strip_dot(rest, "horizon"));
      } catch (const std::exception&) {
        throw error("bad horizon line: " + line);
      }
    } else if (kw == "context") {
      std::vector<std::string> toks = split_ws(rest);
      if (toks.empty() || !msg::valid_component_name(toks[0])) {
        throw error("context needs a lowercase name: " + line);
      }
      ContextSpec c;
      c.name = toks[0];
      if (toks.size() > 1) {
        if (toks[1] != "roles") {
          throw error("context line reads: context NAME [roles R1 R2 ...]: " + line);
        }
        for (std::size_t i = 2; i < toks.size(); ++i) {
          if (!msg::valid_component_name(toks[i])) {
            throw error("bad role name: " + toks[i]);
          }
          c.roles.push_back(toks[i]);
        }
      }
      for (const ContextSpec& prev : spec.contexts) {
        if (prev.name == c.name) throw error("duplicate context: " + c.name);
      }
      spec.contexts.push_back(std::move(c));
      open = &spec.contexts.back();
    } else if (kw == "facts") {
      if (!open) throw error("facts outside a context block: " + line);
      fact_text[open->name] += rest + "\n";
    } else if (kw == "service") {
      if (!open) throw error("service outside a context block: " + line);
      if (open->service_path) throw error("duplicate service line for " + open->name);
      open->service_path = rest;
    } else if (kw == "bridge") {
      spec.bridges.push_back(parse_bridge(rest));
      open = nullptr;
    } else if (kw == "at") {
      parse_at(rest, spec.schedule);
      open = nullptr;
    } else {
      throw error("unknown system-file directive: " + kw);
    }
  }
  for (ContextSpec& c : spec.contexts) {
    if (auto it = fact_text.find(c.name); it != fact_text.end()) {
      if (c.service_path) {
        throw error("context " + c.name + " has both facts and a service");
      }
      c.facts = asp::parse_program(it->second);
    }
  }
  return spec;
}

SystemSpec load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open system file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto slash = path.find_last_of('/');
  std::string dir = slash == std::string::npos ? "." : path.substr(0, slash);
  return parse_system(buf.str(), dir);
}

std::string to_text(const SystemSpec& spec) {
  std::ostringstream out;
  out << "horizon " << spec.horizon << ".\n";
  for (const ContextSpec& c : spec.contexts) {
    out << "context " << c.name;
    if (!c.roles.empty()) {
      out << " roles";
      for (const std::string& r : c.roles) out << " " << r;
    }
    out << "\n";
    if (c.service_path) out << "  service " << *c.service_path << "\n";
    for (const asp::Rule& r : c.facts.rules) {
      out << "  facts " << asp::to_string(r) << "\n";
    }
  }
  for (const BridgeRule& r : spec.bridges) {
    out << "bridge " << to_string(r) << "\n";
  }
  for (const auto& [t, updates] : spec.schedule) {
    for (const Update& u : updates) {
      out << "at " << t << ": " << u.context << " " << u.change.op << " "
          << asp::to_string(u.change.atom) << ".\n";
    }
  }
  return out.str();
}

System build_system(const SystemSpec& spec, msg::Transport* transport) {
  System M;
  M.rules = spec.bridges;
  for (const ContextSpec& c : spec.contexts) {
    if (c.service_path) {
      std::string path = *c.service_path;
      if (!path.empty() && path.front() != '/') {
        path = spec.base_dir + "/" + path;
      }
      shell::ServiceDescriptor d = shell::load_descriptor_file(path);
      if (transport) {
        M.contexts.push_back(std::make_unique<AgentContext>(
            c.name, c.roles, std::move(d), *transport));
      } else {
        M.contexts.push_back(
            std::make_unique<ServiceContext>(c.name, c.roles, std::move(d)));
      }
    } else {
      std::set<asp::Atom> facts;
      for (const asp::Rule& r : asp::expand_ranges(c.facts).rules) {
        if (!r.is_fact() || !r.head->is_ground()) {
          throw error("context " + c.name + " facts must be ground facts");
        }
        facts.insert(*r.head);
      }
      if (transport) transport->register_component(c.name, c.roles);
      M.contexts.push_back(
          std::make_unique<FactStoreContext>(c.name, c.roles, std::move(facts)));
    }
  }
  return M;
}

}  // namespace muasp::mcs
