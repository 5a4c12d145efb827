#ifndef SCSIM_ERRORS_HPP
#define SCSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scsim {

/// Bad user input or malformed data. The CLI maps this family to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Correlation metric has no defined value (zero denominator / constant stream).
class UndefinedCorrelationError : public ValidationError {
public:
    explicit UndefinedCorrelationError(const std::string& msg) : ValidationError(msg) {}
};

/// Stochastic division with an all-zero denominator or a zero analytic denominator.
class DivisionUndefinedError : public ValidationError {
public:
    explicit DivisionUndefinedError(const std::string& msg) : ValidationError(msg) {}
};

/// Fusion where both the target product and its complement product vanish.
class DegenerateFusionError : public ValidationError {
public:
    explicit DegenerateFusionError(const std::string& msg) : ValidationError(msg) {}
};

/// Structurally broken netlist (bad arity, dangling ids, combinational cycle).
class NetlistInvalidError : public ValidationError {
public:
    explicit NetlistInvalidError(const std::string& msg) : ValidationError(msg) {}
};

/// Network topology outside the supported dependency patterns.
class UnsupportedStructureError : public ValidationError {
public:
    explicit UnsupportedStructureError(const std::string& msg) : ValidationError(msg) {}
};

/// Lexical/syntax error with source position, for DSL and netlist files.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& file, int line, int col, const std::string& msg)
        : ValidationError(file + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": " + msg),
          file_(file), line_(line), col_(col), message_(msg) {}

    const std::string& file() const { return file_; }
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string& message() const { return message_; }

private:
    std::string file_;
    int line_;
    int col_;
    std::string message_;
};

/// A statistical precondition observed to be violated at run time. Not an
/// exception: warnings are attached to run reports and the CLI exits with
/// code 2 when any are present.
struct ContractWarning {
    std::string where;    // node or stream pair the check applies to
    std::string message;
    double measured = 0.0;  // the offending measured quantity (usually an SCC)
};

}  // namespace scsim

#endif
