#pragma once

#include <string>
#include <string_view>

#include "muasp/shell/shell.hpp"

namespace muasp::shell {

// Descriptor document format, line oriented. Section headers start a line:
//
//   program:          inline ASP source on the following lines, or a single
//                     path token (no spaces, no trailing dot) resolved
//                     against base_dir
//   activation: a     ground atom, optional section
//   stop: s           ground atom, optional section
//   inputs: p/2 q     whitespace-separated schemas; bare name means arity 0
//   outputs: r/1
//   queries:          one per line: mode atom, mode in
//                     {brave, some-not, M, K, NOT}
//   retention: stateless | stateful pred1 pred2 ...
//
// Unknown headers are errors. '%' comment lines outside program: are
// skipped.
ServiceDescriptor parse_descriptor(std::string_view text, const std::string& base_dir = ".");

ServiceDescriptor load_descriptor_file(const std::string& path);

// Canonical document for a descriptor; parse_descriptor round-trips it.
std::string to_text(const ServiceDescriptor& d);

}  // namespace muasp::shell
