#pragma once

// Minimal YAML subset used by the fixture, scenario, and policy file
// formats. Supports block mappings/sequences, flow sequences of scalars,
// double-quoted scalars with escapes, and full-line or trailing comments.
// Mappings preserve declaration order so emitted documents are stable.

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sscs::yaml {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line)
        : std::runtime_error("yaml: line " + std::to_string(line) + ": " + msg),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

class Node {
public:
    enum class Kind { Scalar, Sequence, Mapping };

    Node() : kind_(Kind::Scalar) {}

    static Node scalar(std::string value) {
        Node n;
        n.kind_ = Kind::Scalar;
        n.scalar_ = std::move(value);
        return n;
    }
    static Node sequence() {
        Node n;
        n.kind_ = Kind::Sequence;
        return n;
    }
    static Node mapping() {
        Node n;
        n.kind_ = Kind::Mapping;
        return n;
    }

    Kind kind() const { return kind_; }
    bool is_scalar() const { return kind_ == Kind::Scalar; }
    bool is_sequence() const { return kind_ == Kind::Sequence; }
    bool is_mapping() const { return kind_ == Kind::Mapping; }

    int line() const { return line_; }
    void set_line(int line) { line_ = line; }

    // -- scalar access ------------------------------------------------

    const std::string& as_string() const {
        require(Kind::Scalar, "scalar");
        return scalar_;
    }

    long long as_int() const {
        require(Kind::Scalar, "integer");
        try {
            size_t pos = 0;
            long long v = std::stoll(scalar_, &pos);
            if (pos != scalar_.size()) throw std::invalid_argument(scalar_);
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected integer, got \"" + scalar_ + "\"", line_);
        }
    }

    bool as_bool() const {
        require(Kind::Scalar, "boolean");
        if (scalar_ == "true") return true;
        if (scalar_ == "false") return false;
        throw ParseError("expected true/false, got \"" + scalar_ + "\"", line_);
    }

    // -- sequence access ----------------------------------------------

    const std::vector<Node>& items() const {
        require(Kind::Sequence, "sequence");
        return seq_;
    }
    void push_back(Node n) {
        require(Kind::Sequence, "sequence");
        seq_.push_back(std::move(n));
    }

    // -- mapping access -----------------------------------------------

    const std::vector<std::pair<std::string, Node>>& entries() const {
        require(Kind::Mapping, "mapping");
        return map_;
    }

    bool has(std::string_view key) const {
        require(Kind::Mapping, "mapping");
        for (const auto& [k, v] : map_)
            if (k == key) return true;
        return false;
    }

    const Node* find(std::string_view key) const {
        require(Kind::Mapping, "mapping");
        for (const auto& [k, v] : map_)
            if (k == key) return &v;
        return nullptr;
    }

    // Required-field lookup; missing keys are reported with the field name.
    const Node& at(std::string_view key) const {
        if (const Node* n = find(key)) return *n;
        throw ParseError("missing required field \"" + std::string(key) + "\"", line_);
    }

    void set(std::string key, Node value) {
        require(Kind::Mapping, "mapping");
        for (auto& [k, v] : map_) {
            if (k == key) {
                v = std::move(value);
                return;
            }
        }
        map_.emplace_back(std::move(key), std::move(value));
    }

    friend bool operator==(const Node& a, const Node& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
            case Kind::Scalar: return a.scalar_ == b.scalar_;
            case Kind::Sequence: return a.seq_ == b.seq_;
            case Kind::Mapping: return a.map_ == b.map_;
        }
        return false;
    }

private:
    void require(Kind k, const char* what) const {
        if (kind_ != k) {
            throw ParseError(std::string("expected ") + what, line_);
        }
    }

    Kind kind_;
    std::string scalar_;
    std::vector<Node> seq_;
    std::vector<std::pair<std::string, Node>> map_;
    int line_ = 0;
};

namespace detail {

struct Line {
    int number = 0;
    int indent = 0;
    std::string content;  // comment-stripped, no leading indent
};

inline std::string strip_trailing_comment(const std::string& s) {
    bool in_quote = false;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '"') {
            if (in_quote && i > 0 && s[i - 1] == '\\') continue;
            in_quote = !in_quote;
        } else if (c == '#' && !in_quote && (i == 0 || s[i - 1] == ' ')) {
            size_t end = i == 0 ? 0 : i - 1;
            while (end > 0 && s[end - 1] == ' ') --end;
            return s.substr(0, end);
        }
    }
    return s;
}

inline std::vector<Line> scan_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string raw(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                       : eol - pos));
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.find('\t') != std::string::npos)
            throw ParseError("tab characters are not allowed in indentation", number);
        size_t indent = raw.find_first_not_of(' ');
        if (indent != std::string::npos) {
            std::string content = strip_trailing_comment(raw.substr(indent));
            if (!content.empty())
                out.push_back(Line{number, static_cast<int>(indent), content});
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

    Node parse_document() {
        if (lines_.empty()) {
            Node n = Node::mapping();
            n.set_line(1);
            return n;
        }
        Node root = parse_block(lines_.front().indent);
        if (pos_ != lines_.size())
            throw ParseError("unexpected content after document", lines_[pos_].number);
        return root;
    }

private:
    bool done() const { return pos_ >= lines_.size(); }
    const Line& cur() const { return lines_[pos_]; }

    static bool is_seq_item(const std::string& s) {
        return s == "-" || s.rfind("- ", 0) == 0;
    }

    Node parse_block(int indent) {
        const Line& first = cur();
        if (first.indent != indent)
            throw ParseError("bad indentation", first.number);
        if (is_seq_item(first.content)) return parse_sequence(indent);
        return parse_mapping(indent);
    }

    Node parse_sequence(int indent) {
        Node seq = Node::sequence();
        seq.set_line(cur().number);
        while (!done() && cur().indent == indent && is_seq_item(cur().content)) {
            Line line = cur();
            ++pos_;
            std::string rest = line.content == "-" ? "" : line.content.substr(2);
            if (rest.empty()) {
                if (done() || cur().indent <= indent)
                    throw ParseError("empty sequence item", line.number);
                seq.push_back(parse_block(cur().indent));
            } else if (rest.front() != '"' && rest.front() != '[' &&
                       find_key_split(rest) != std::string::npos) {
                seq.push_back(parse_inline_map(rest, line.number, indent + 2));
            } else {
                seq.push_back(parse_value(rest, line.number));
            }
        }
        return seq;
    }

    Node parse_mapping(int indent) {
        Node map = Node::mapping();
        map.set_line(cur().number);
        while (!done() && cur().indent == indent && !is_seq_item(cur().content)) {
            Line line = cur();
            ++pos_;
            size_t split = find_key_split(line.content);
            if (split == std::string::npos)
                throw ParseError("expected \"key: value\"", line.number);
            std::string key = parse_scalar_text(line.content.substr(0, split), line.number);
            if (map.has(key))
                throw ParseError("duplicate key \"" + key + "\"", line.number);
            std::string rest = line.content.substr(split + 1);
            while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
            if (rest.empty()) {
                map.set(key, parse_nested(indent, line.number));
            } else {
                map.set(key, parse_value(rest, line.number));
            }
        }
        return map;
    }

    // Value of a "key:" line: a nested block (deeper indent), a sequence at
    // the same indent, or an empty mapping when nothing follows.
    Node parse_nested(int indent, int line_number) {
        if (!done() && cur().indent > indent) return parse_block(cur().indent);
        if (!done() && cur().indent == indent && is_seq_item(cur().content))
            return parse_sequence(indent);
        Node empty = Node::mapping();
        empty.set_line(line_number);
        return empty;
    }

    // "- key: value" opens a mapping whose further keys sit at child_indent.
    Node parse_inline_map(const std::string& text, int line_number, int child_indent) {
        Node map = Node::mapping();
        map.set_line(line_number);
        size_t split = find_key_split(text);
        std::string key = parse_scalar_text(text.substr(0, split), line_number);
        std::string rest = text.substr(split + 1);
        while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
        if (rest.empty()) {
            map.set(key, parse_nested(child_indent, line_number));
        } else {
            map.set(key, parse_value(rest, line_number));
        }
        while (!done() && cur().indent == child_indent && !is_seq_item(cur().content)) {
            Node more = parse_mapping(child_indent);
            for (const auto& [k, v] : more.entries()) {
                if (map.has(k))
                    throw ParseError("duplicate key \"" + k + "\"", more.line());
                map.set(k, v);
            }
        }
        return map;
    }

    Node parse_value(const std::string& text, int line_number) {
        if (text == "{}") {
            Node n = Node::mapping();
            n.set_line(line_number);
            return n;
        }
        if (!text.empty() && text.front() == '[') return parse_flow_sequence(text, line_number);
        Node n = Node::scalar(parse_scalar_text(text, line_number));
        n.set_line(line_number);
        return n;
    }

    Node parse_flow_sequence(const std::string& text, int line_number) {
        if (text.back() != ']')
            throw ParseError("unterminated flow sequence", line_number);
        Node seq = Node::sequence();
        seq.set_line(line_number);
        std::string body = text.substr(1, text.size() - 2);
        std::string item;
        bool in_quote = false;
        bool any = false;
        auto flush = [&] {
            while (!item.empty() && item.front() == ' ') item.erase(item.begin());
            while (!item.empty() && item.back() == ' ') item.pop_back();
            if (item.empty() && !any)
                throw ParseError("empty flow sequence item", line_number);
            Node n = Node::scalar(parse_scalar_text(item, line_number));
            n.set_line(line_number);
            seq.push_back(std::move(n));
            item.clear();
        };
        for (size_t i = 0; i < body.size(); ++i) {
            char c = body[i];
            if (c == '"' && (i == 0 || body[i - 1] != '\\')) in_quote = !in_quote;
            if (c == ',' && !in_quote) {
                any = true;
                flush();
            } else {
                item.append(1, c);
            }
        }
        bool blank = true;
        for (char c : item)
            if (c != ' ') blank = false;
        if (!blank || any) flush();
        return seq;
    }

    // Index of the ':' separating key from value, or npos. The colon must be
    // followed by a space or end the text, so plain scalars like image:tag
    // survive as values.
    static size_t find_key_split(const std::string& s) {
        bool in_quote = false;
        for (size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c == '"' && (i == 0 || s[i - 1] != '\\')) in_quote = !in_quote;
            if (c == ':' && !in_quote && (i + 1 == s.size() || s[i + 1] == ' ')) return i;
        }
        return std::string::npos;
    }

    static std::string parse_scalar_text(const std::string& text, int line_number) {
        if (text.empty()) return text;
        if (text.front() != '"') return text;
        if (text.size() < 2 || text.back() != '"')
            throw ParseError("unterminated quoted scalar", line_number);
        std::string out;
        for (size_t i = 1; i + 1 < text.size(); ++i) {
            char c = text[i];
            if (c != '\\') {
                out.append(1, c);
                continue;
            }
            if (i + 2 >= text.size())
                throw ParseError("dangling escape in quoted scalar", line_number);
            char e = text[++i];
            switch (e) {
                case 'n': out.append(1, '\n'); break;
                case 't': out.append(1, '\t'); break;
                case '"': out.append(1, '"'); break;
                case '\\': out.append(1, '\\'); break;
                default:
                    throw ParseError(std::string("unknown escape \\") + e, line_number);
            }
        }
        return out;
    }

    std::vector<Line> lines_;
    size_t pos_ = 0;
};

inline bool needs_quotes(const std::string& s) {
    if (s.empty()) return true;
    if (s.front() == ' ' || s.back() == ' ') return true;
    if (s.front() == '-' || s.front() == '[' || s.front() == ']' || s.front() == '{' ||
        s.front() == '}' || s.front() == '"' || s.front() == '\'' || s.front() == '&' ||
        s.front() == '*' || s.front() == '?' || s.front() == '|' || s.front() == '>' ||
        s.front() == '%' || s.front() == '@' || s.front() == '`' || s.front() == '#')
        return true;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '\n' || c == '\t' || c == '"' || c == ',' || c == '[' || c == ']') return true;
        if (c == '#' && i > 0 && s[i - 1] == ' ') return true;
        if (c == ':' && (i + 1 == s.size() || s[i + 1] == ' ')) return true;
    }
    return false;
}

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            default: out.append(1, c);
        }
    }
    out += "\"";
    return out;
}

inline std::string emit_scalar_text(const std::string& s) {
    return needs_quotes(s) ? quote(s) : s;
}

inline void emit_node(const Node& node, std::string& out, int indent);

inline bool all_scalars(const Node& seq) {
    for (const Node& item : seq.items())
        if (!item.is_scalar()) return false;
    return true;
}

inline std::string flow_sequence_text(const Node& seq) {
    std::string out = "[";
    bool first = true;
    for (const Node& item : seq.items()) {
        if (!first) out += ", ";
        first = false;
        out += emit_scalar_text(item.as_string());
    }
    out += "]";
    return out;
}

inline void emit_key_value(const std::string& key, const Node& value, std::string& out,
                           int indent) {
    out.append(indent, ' ');
    out += emit_scalar_text(key);
    out += ":";
    if (value.is_scalar()) {
        out += " " + emit_scalar_text(value.as_string()) + "\n";
        return;
    }
    if (value.is_sequence()) {
        if (value.items().empty() || all_scalars(value)) {
            out += " " + flow_sequence_text(value) + "\n";
            return;
        }
        out += "\n";
        emit_node(value, out, indent + 2);
        return;
    }
    if (value.entries().empty()) {
        out += " {}\n";
        return;
    }
    out += "\n";
    emit_node(value, out, indent + 2);
}

inline void emit_node(const Node& node, std::string& out, int indent) {
    switch (node.kind()) {
        case Node::Kind::Scalar:
            out.append(indent, ' ');
            out += emit_scalar_text(node.as_string()) + "\n";
            break;
        case Node::Kind::Sequence:
            for (const Node& item : node.items()) {
                if (item.is_mapping() && !item.entries().empty()) {
                    out.append(indent, ' ');
                    out += "- ";
                    bool first = true;
                    for (const auto& [k, v] : item.entries()) {
                        if (first) {
                            std::string inner;
                            emit_key_value(k, v, inner, indent + 2);
                            out += inner.substr(static_cast<size_t>(indent) + 2);
                            first = false;
                        } else {
                            emit_key_value(k, v, out, indent + 2);
                        }
                    }
                } else if (item.is_mapping()) {
                    out.append(indent, ' ');
                    out += "- {}\n";
                } else if (item.is_scalar()) {
                    out.append(indent, ' ');
                    out += "- " + emit_scalar_text(item.as_string()) + "\n";
                } else if (all_scalars(item)) {
                    out.append(indent, ' ');
                    out += "- " + flow_sequence_text(item) + "\n";
                } else {
                    out.append(indent, ' ');
                    out += "-\n";
                    emit_node(item, out, indent + 2);
                }
            }
            break;
        case Node::Kind::Mapping:
            for (const auto& [k, v] : node.entries()) emit_key_value(k, v, out, indent);
            break;
    }
}

}  // namespace detail

inline Node parse(std::string_view text) {
    return detail::Parser(detail::scan_lines(text)).parse_document();
}

inline std::string emit(const Node& node) {
    std::string out;
    detail::emit_node(node, out, 0);
    return out;
}

// Convenience builders used by the serializers.
inline Node scalar(std::string v) { return Node::scalar(std::move(v)); }
inline Node scalar(const char* v) { return Node::scalar(std::string(v)); }
inline Node scalar(long long v) { return Node::scalar(std::to_string(v)); }
inline Node scalar(int v) { return Node::scalar(std::to_string(v)); }
inline Node scalar(bool v) { return Node::scalar(v ? "true" : "false"); }

inline Node string_list(const std::vector<std::string>& values) {
    Node seq = Node::sequence();
    for (const std::string& v : values) seq.push_back(Node::scalar(v));
    return seq;
}

}  // namespace sscs::yaml
