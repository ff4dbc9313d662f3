#ifndef MIDICOTH_ERROR_HPP
#define MIDICOTH_ERROR_HPP

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace midicoth {

// Recoverable stream-level failures: malformed container, truncated or
// corrupt payload. The CLI maps these to a nonzero exit.
class CodecError : public std::runtime_error {
public:
    enum class Kind { BadFormat, Corrupt };

    CodecError(Kind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Internal logic faults (broken invariants), never stream conditions.
#define MDC_CHECK(cond, msg)                                              \
    do {                                                                  \
        if (!(cond)) {                                                    \
            std::fprintf(stderr, "midicoth: internal error: %s (%s:%d)\n", \
                         msg, __FILE__, __LINE__);                        \
            std::abort();                                                 \
        }                                                                 \
    } while (0)

} // namespace midicoth

#endif
