#pragma once

#include <stdexcept>
#include <string>

namespace mdlab {

// Error taxonomy shared by every module.  The CLI maps categories to exit
// codes: assertion failures -> 2, precision/configuration/resource -> 3.
enum class ErrorKind {
    Domain,      // argument outside the operation's contract
    Precision,   // certified arithmetic could not reach the required accuracy
    Resource,    // enumeration/memory budget exceeded
    Config,      // inconsistent experiment configuration
    Branch,      // caller is on the wrong proof-branch pathway
    Assertion,   // a checked property failed, witness in message
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline Error domain_error(const std::string& m) { return Error(ErrorKind::Domain, m); }
inline Error precision_error(const std::string& m) { return Error(ErrorKind::Precision, m); }
inline Error resource_error(const std::string& m) { return Error(ErrorKind::Resource, m); }
inline Error config_error(const std::string& m) { return Error(ErrorKind::Config, m); }
inline Error branch_error(const std::string& m) { return Error(ErrorKind::Branch, m); }
inline Error assertion_error(const std::string& m) { return Error(ErrorKind::Assertion, m); }

}  // namespace mdlab
