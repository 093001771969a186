#ifndef COARSE_ERROR_HPP
#define COARSE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace coarse {

// Errors carry a short machine-readable code ("empty-subset", "window-too-large", ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

}

#endif
