#ifndef RLNC_ERRORS_HPP
#define RLNC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rlnc {

struct ZeroInverse : std::domain_error {
    explicit ZeroInverse(const std::string& m) : std::domain_error(m) {}
};
struct NoSuchElement : std::domain_error {
    explicit NoSuchElement(const std::string& m) : std::domain_error(m) {}
};
struct ShapeMismatch : std::invalid_argument {
    explicit ShapeMismatch(const std::string& m) : std::invalid_argument(m) {}
};
struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& m) : std::invalid_argument(m) {}
};
struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& m) : std::out_of_range(m) {}
};
struct WrongState : std::logic_error {
    explicit WrongState(const std::string& m) : std::logic_error(m) {}
};
struct SingularMatrix : std::runtime_error {
    explicit SingularMatrix(const std::string& m) : std::runtime_error(m) {}
};
struct MalformedHeader : std::runtime_error {
    explicit MalformedHeader(const std::string& m) : std::runtime_error(m) {}
};
struct InvalidP0 : std::invalid_argument {
    explicit InvalidP0(const std::string& m) : std::invalid_argument(m) {}
};
struct InvalidArgs : std::invalid_argument {
    explicit InvalidArgs(const std::string& m) : std::invalid_argument(m) {}
};
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& m) : std::runtime_error(m) {}
};
struct DecodeAssertion : std::logic_error {
    explicit DecodeAssertion(const std::string& m) : std::logic_error(m) {}
};

}  // namespace rlnc

#endif
