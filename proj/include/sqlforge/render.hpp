#pragma once

#include <string>

#include "sqlforge/ast.hpp"

namespace sqlforge {

namespace detail {

// Canonical single-line token joining: one space between tokens, none
// before "," ")" ".", none after "(" ".", and none between a function
// name and its "(". Matches the canonical statement layout, e.g.
// "SELECT C.CampaignName ... ORDER BY SUM(I.Clicks) DESC LIMIT 10".
inline std::string join_leaves(const std::vector<const Node*>& leaves) {
    std::string out;
    const Node* prev = nullptr;
    for (const Node* leaf : leaves) {
        if (prev) {
            const std::string& p = prev->label;
            const std::string& c = leaf->label;
            const bool no_space =
                (c == "," || c == ")" || c == "." || c == ";") ||
                (p == "(" || p == ".") ||
                (c == "(" && prev->token_class == TokenClass::FunctionName);
            if (!no_space) out.push_back(' ');
        }
        out += leaf->label;
        prev = leaf;
    }
    return out;
}

}  // namespace detail

// Deterministic canonical rendering of a tree (statement or skeleton).
inline std::string render_node(const Node& node) {
    return detail::join_leaves(leaves_of(node));
}

inline std::string render_sql(const SqlAst& ast) { return render_node(ast.root); }

}  // namespace sqlforge
