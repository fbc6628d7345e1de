#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqlforge/ast.hpp"
#include "sqlforge/util.hpp"

namespace sqlforge {

struct ParseError : std::runtime_error {
    size_t offset;
    std::string expected;

    ParseError(size_t offset_, const std::string& expected_)
        : std::runtime_error("parse error at offset " + std::to_string(offset_) +
                             ": expected " + expected_),
          offset(offset_),
          expected(expected_) {}
};

// Reserved words of the supported SQLite SELECT subset. Fixed table,
// versioned with the library; bump KEYWORD_TABLE_VERSION when it changes.
inline constexpr int KEYWORD_TABLE_VERSION = 1;

inline const std::set<std::string>& reserved_keywords() {
    static const std::set<std::string> kw = {
        "SELECT", "DISTINCT", "FROM", "WHERE", "GROUP", "BY", "HAVING",
        "ORDER", "LIMIT", "OFFSET", "JOIN", "ON", "AS", "AND", "OR",
        "NOT", "IN", "LIKE", "BETWEEN", "IS", "NULL", "UNION",
        "INTERSECT", "EXCEPT", "ALL", "CASE", "WHEN", "THEN", "ELSE",
        "END", "ASC", "DESC", "EXISTS", "LEFT", "RIGHT", "INNER",
        "OUTER", "CROSS", "GLOB",
    };
    return kw;
}

// Well-known SQLite function names. Words in this table are classified
// function-name when directly followed by "("; unknown identifiers in
// function position get the same treatment.
inline const std::set<std::string>& known_functions() {
    static const std::set<std::string> fn = {
        "COUNT", "SUM", "AVG", "MIN", "MAX", "TOTAL", "GROUP_CONCAT",
        "ABS", "ROUND", "LENGTH", "UPPER", "LOWER", "SUBSTR", "TRIM",
        "LTRIM", "RTRIM", "REPLACE", "INSTR", "COALESCE", "IFNULL",
        "NULLIF", "DATE", "TIME", "DATETIME", "STRFTIME", "JULIANDAY",
    };
    return fn;
}

struct Token {
    TokenClass cls = TokenClass::Keyword;
    std::string text;
    size_t offset = 0;
    FillType placeholder_type = FillType::COLUMN;  // when cls == PlaceholderMark
};

namespace detail {

inline bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

// Tokenizes one statement. Comments are stripped, keywords are
// upper-cased, identifier case is preserved. With allow_placeholders
// the five "[...]" markers lex as placeholder tokens (template text).
inline std::vector<Token> lex_sql(std::string_view text, bool allow_placeholders = false) {
    std::vector<Token> tokens;
    size_t i = 0;
    const size_t n = text.size();

    auto push = [&](TokenClass cls, std::string tok, size_t at) {
        tokens.push_back(Token{cls, std::move(tok), at, FillType::COLUMN});
    };

    while (i < n) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        // comments
        if (c == '-' && i + 1 < n && text[i + 1] == '-') {
            while (i < n && text[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && text[i + 1] == '*') {
            const size_t start = i;
            i += 2;
            while (i + 1 < n && !(text[i] == '*' && text[i + 1] == '/')) ++i;
            if (i + 1 >= n) throw ParseError(start, "closing */ for block comment");
            i += 2;
            continue;
        }
        if (c == '\'') {
            const size_t start = i;
            std::string raw;
            raw.push_back('\'');
            ++i;
            bool closed = false;
            while (i < n) {
                if (text[i] == '\'') {
                    if (i + 1 < n && text[i + 1] == '\'') {  // '' escape
                        raw += "''";
                        i += 2;
                        continue;
                    }
                    raw.push_back('\'');
                    ++i;
                    closed = true;
                    break;
                }
                raw.push_back(text[i]);
                ++i;
            }
            if (!closed) throw ParseError(start, "closing ' for string literal");
            push(TokenClass::StringLiteral, std::move(raw), start);
            continue;
        }
        if (detail::is_digit(c)) {
            const size_t start = i;
            std::string num;
            while (i < n && detail::is_digit(text[i])) num.push_back(text[i++]);
            if (i < n && text[i] == '.' && i + 1 < n && detail::is_digit(text[i + 1])) {
                num.push_back(text[i++]);
                while (i < n && detail::is_digit(text[i])) num.push_back(text[i++]);
            }
            if (i < n && (text[i] == 'e' || text[i] == 'E')) {
                size_t j = i + 1;
                if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < n && detail::is_digit(text[j])) {
                    num.push_back(text[i++]);
                    if (text[i] == '+' || text[i] == '-') num.push_back(text[i++]);
                    while (i < n && detail::is_digit(text[i])) num.push_back(text[i++]);
                }
            }
            push(TokenClass::NumericLiteral, std::move(num), start);
            continue;
        }
        if (detail::is_ident_start(c)) {
            const size_t start = i;
            std::string word;
            while (i < n && detail::is_ident_char(text[i])) word.push_back(text[i++]);
            const std::string upper = to_upper(word);
            if (reserved_keywords().count(upper)) {
                push(TokenClass::Keyword, upper, start);
            } else {
                // function-name classification needs lookahead for "(",
                // which the parser resolves; lex as identifier here.
                push(TokenClass::Identifier, std::move(word), start);
            }
            continue;
        }
        if (c == '[') {
            const size_t start = i;
            auto close = text.find(']', i);
            if (!allow_placeholders || close == std::string_view::npos) {
                throw ParseError(start, "token in the supported SQL subset");
            }
            const std::string inner(text.substr(i + 1, close - i - 1));
            std::optional<FillType> type;
            if (inner == "table") type = FillType::TABLE;
            else if (inner == "column") type = FillType::COLUMN;
            else if (inner == "alias") type = FillType::ALIAS;
            else if (inner == "number") type = FillType::NUM_VALUE;
            else if (inner == "string") type = FillType::STR_VALUE;
            if (!type) throw ParseError(start, "placeholder [table]/[column]/[alias]/[number]/[string]");
            Token t;
            t.cls = TokenClass::PlaceholderMark;
            t.text = "[" + inner + "]";
            t.offset = start;
            t.placeholder_type = *type;
            tokens.push_back(std::move(t));
            i = close + 1;
            continue;
        }
        // operators and punctuation
        const size_t start = i;
        auto two = (i + 1 < n) ? std::string(text.substr(i, 2)) : std::string();
        if (two == "<=" || two == ">=" || two == "!=" || two == "<>" || two == "||" || two == "==") {
            push(TokenClass::Operator, two, start);
            i += 2;
            continue;
        }
        switch (c) {
            case '=': case '<': case '>': case '+': case '-': case '/': case '%':
                push(TokenClass::Operator, std::string(1, c), start);
                ++i;
                continue;
            case '*':
                push(TokenClass::Star, "*", start);
                ++i;
                continue;
            case '(': case ')': case ',': case '.': case ';':
                push(TokenClass::Punctuation, std::string(1, c), start);
                ++i;
                continue;
            default:
                throw ParseError(start, "token in the supported SQL subset");
        }
    }
    return tokens;
}

}  // namespace sqlforge
