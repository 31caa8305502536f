#pragma once
// Exception hierarchy shared across the library.

#include <stdexcept>
#include <string>

namespace hitab {

// Violated precondition or incompatible parameters.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// A configured budget (memory, enumeration) would be exceeded.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed serialized container. Subclasses distinguish the failure.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

class bad_magic_error : public parse_error {
public:
    explicit bad_magic_error(const std::string& what) : parse_error(what) {}
};

class bad_version_error : public parse_error {
public:
    explicit bad_version_error(const std::string& what) : parse_error(what) {}
};

class truncated_error : public parse_error {
public:
    explicit truncated_error(const std::string& what) : parse_error(what) {}
};

class bad_checksum_error : public parse_error {
public:
    explicit bad_checksum_error(const std::string& what) : parse_error(what) {}
};

} // namespace hitab
