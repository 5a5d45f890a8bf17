#pragma once

#include <stdexcept>
#include <string>

namespace muasp {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

namespace asp {

// Syntax and safety violations, with source position.
class parse_error : public muasp::error {
public:
    parse_error(int line, int col, const std::string& what)
        : muasp::error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
                       ": " + what),
          line_(line),
          col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

// Range expansion and grounding failures (inverted ranges, unsafe rules,
// integer overflow).
class ground_error : public muasp::error {
public:
    using muasp::error::error;
};

}  // namespace asp
}  // namespace muasp
