#ifndef SCSIM_COMPILER_HPP
#define SCSIM_COMPILER_HPP

#include <optional>
#include <string>
#include <vector>

#include "scsim/bayes.hpp"
#include "scsim/netlist.hpp"

namespace scsim {

struct SourceSpan {
    int line = 0;
    int col = 0;
};

/// One variable of a network description. `table` holds 2^k probabilities for
/// k parents, indexed by the parent truth assignment with the first declared
/// parent as the most significant bit; a parentless node has the single-entry
/// table {prior}.
struct NodeDecl {
    std::string name;
    std::vector<std::string> parents;
    std::vector<double> table;
    SourceSpan span;
};

struct Query {
    std::string target;
    std::optional<std::string> evidence;
    SourceSpan span;
};

/// Parsed network description (see docs/network-dsl.md for the grammar).
struct NetworkSpec {
    std::string name;
    std::string filename;  // for diagnostics
    std::vector<NodeDecl> nodes;
    Query query;

    const NodeDecl* find(const std::string& name) const;
};

/// Parses DSL text. Throws ParseError with file:line:col positions for
/// lexical and syntax errors, duplicate nodes, out-of-range probability
/// literals, incomplete tables, and undeclared references.
NetworkSpec parse_network(const std::string& text, const std::string& filename = "<input>");

enum class StructureKind {
    OneParentOneChild,
    TwoParentOneChild,
    OneParentTwoChild,
    Custom,  // hand-written netlists loaded from text
};

/// A compiled executable plan. The netlist's source lines carry the encoder
/// allocation (streams that must correlate share an sne id) and its corr
/// lines carry the constraints to verify after a run.
struct CompilePlan {
    StructureKind kind = StructureKind::Custom;
    CircuitNetlist netlist;
};

/// Maps the network onto its multiplexer template. Topologies outside the
/// three supported dependency patterns raise UnsupportedStructureError naming
/// the offending edges. Pure: byte-identical output for byte-identical input.
CompilePlan compile_network(const NetworkSpec& spec);

std::string emit_plan(const CompilePlan& plan);
CompilePlan load_plan(const std::string& text, const std::string& filename = "<netlist>");

}  // namespace scsim

#endif
