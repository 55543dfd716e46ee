#pragma once

#include <stdexcept>
#include <string>

namespace modl {

// Domain-level failure with a stable machine-readable code.  The CLI maps
// any modl::error to exit status 1 and serializes {code, message}.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct domain_error : error {
    explicit domain_error(const std::string& m) : error("Domain", m) {}
};
struct not_integral_error : error {
    explicit not_integral_error(const std::string& m) : error("NotIntegral", m) {}
};
struct context_mismatch_error : error {
    explicit context_mismatch_error(const std::string& m) : error("ContextMismatch", m) {}
};
struct shape_mismatch_error : error {
    explicit shape_mismatch_error(const std::string& m) : error("ShapeMismatch", m) {}
};
struct not_regular_error : error {
    explicit not_regular_error(const std::string& m) : error("NotRegular", m) {}
};
struct disc_mismatch_error : error {
    explicit disc_mismatch_error(const std::string& m) : error("DiscMismatch", m) {}
};
struct no_auxiliary_place_error : error {
    explicit no_auxiliary_place_error(const std::string& m) : error("NoAuxiliaryPlace", m) {}
};
struct search_exhausted_error : error {
    explicit search_exhausted_error(const std::string& m) : error("SearchExhausted", m) {}
};
struct unsupported_spectrum_error : error {
    explicit unsupported_spectrum_error(const std::string& m) : error("UnsupportedSpectrum", m) {}
};

}  // namespace modl
