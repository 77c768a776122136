#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spma {

// Malformed store or New file; line is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateIdError : public std::runtime_error {
public:
    explicit DuplicateIdError(const std::string& id)
        : std::runtime_error("duplicate pattern id '" + id + "'"), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

// Bit costs are undefined over an empty symbol table.
class UndefinedCostError : public std::domain_error {
public:
    UndefinedCostError() : std::domain_error("symbol cost undefined: empty symbol table") {}
};

class MergeRejected : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace spma
