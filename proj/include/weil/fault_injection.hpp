#ifndef WEIL_FAULT_INJECTION_HPP
#define WEIL_FAULT_INJECTION_HPP

#include <string_view>

// Deliberate, documented fault switches used by the mutation-sensitivity part
// of the test suite.  Each flag corrupts one specific internal step so the
// law checks can demonstrate they would catch such a bug.  All flags default
// to off and must stay off in normal operation.
namespace weil::faults {

struct Flags {
    // Omit the 1/alpha! factor in the truncated Taylor sum of lift_map.
    bool drop_taylor_factorial = false;
    // Swap the two factor blocks when translating between a tensor-algebra
    // basis index and its (left, right) factor pair, whenever the swapped
    // monomials happen to exist in the opposite bases.
    bool transpose_tensor_order = false;
    // Skip the generator-nilpotency check in algebra construction and the
    // image-locality check in morphism construction.
    bool skip_locality_check = false;
};

inline Flags& flags() {
    static Flags f;
    return f;
}

inline void reset() { flags() = Flags{}; }

// Returns false for an unknown fault name.  Names are the public CLI spelling.
inline bool set_by_name(std::string_view name, bool on = true) {
    if (name == "drop-taylor-factorial") {
        flags().drop_taylor_factorial = on;
        return true;
    }
    if (name == "transpose-tensor-order") {
        flags().transpose_tensor_order = on;
        return true;
    }
    if (name == "skip-locality-check") {
        flags().skip_locality_check = on;
        return true;
    }
    return false;
}

} // namespace weil::faults

#endif
