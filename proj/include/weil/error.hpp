#ifndef WEIL_ERROR_HPP
#define WEIL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weil {

// Every failure the library can signal.  The CLI maps these to exit code 2
// (usage/validation errors) while law-check *failures* (which are data, not
// exceptions) map to exit code 1.
enum class errc {
    // algebra construction
    not_finite_dimensional,
    not_local,
    empty_relations_with_generators,
    wrong_variable_count,
    // morphisms
    algebra_mismatch,
    relation_not_killed,
    not_local_morphism,
    composition_mismatch,
    // expressions
    syntax_error,
    unknown_identifier,
    arity_violation,
    domain_error,
    mode_mismatch,
    // limits
    not_connected,
    limit_not_weil,
    cone_not_verified,
    non_affine_cone,
    // law harness
    probe_set_not_closed,
    unsupported_bundle,
    // registry / session
    duplicate_name,
};

inline std::string_view to_string(errc c) {
    switch (c) {
        case errc::not_finite_dimensional: return "not_finite_dimensional";
        case errc::not_local: return "not_local";
        case errc::empty_relations_with_generators: return "empty_relations_with_generators";
        case errc::wrong_variable_count: return "wrong_variable_count";
        case errc::algebra_mismatch: return "algebra_mismatch";
        case errc::relation_not_killed: return "relation_not_killed";
        case errc::not_local_morphism: return "not_local_morphism";
        case errc::composition_mismatch: return "composition_mismatch";
        case errc::syntax_error: return "syntax_error";
        case errc::unknown_identifier: return "unknown_identifier";
        case errc::arity_violation: return "arity_violation";
        case errc::domain_error: return "domain_error";
        case errc::mode_mismatch: return "mode_mismatch";
        case errc::not_connected: return "not_connected";
        case errc::limit_not_weil: return "limit_not_weil";
        case errc::cone_not_verified: return "cone_not_verified";
        case errc::non_affine_cone: return "non_affine_cone";
        case errc::probe_set_not_closed: return "probe_set_not_closed";
        case errc::unsupported_bundle: return "unsupported_bundle";
        case errc::duplicate_name: return "duplicate_name";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, std::string message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    // `position` is a character offset into the offending input (expression
    // source, relation string, ...); only some sites have one.
    Error(errc code, std::string message, std::size_t position)
        : std::runtime_error(std::string(to_string(code)) + " at " +
                             std::to_string(position) + ": " + message),
          code_(code), position_(position), has_position_(true) {}

    errc code() const noexcept { return code_; }
    bool has_position() const noexcept { return has_position_; }
    std::size_t position() const noexcept { return position_; }

private:
    errc code_;
    std::size_t position_ = 0;
    bool has_position_ = false;
};

[[noreturn]] inline void fail(errc code, std::string message) {
    throw Error(code, std::move(message));
}

[[noreturn]] inline void fail(errc code, std::string message, std::size_t position) {
    throw Error(code, std::move(message), position);
}

} // namespace weil

#endif
