#pragma once

// Finite balls in discrete groups with a partial product, standing in for the (cocommutative)
// duals of those groups. Elements are keyed by vector<int>:
//   free(k)   reduced words, letters +-(i+1)
//   Z(d)      integer coordinates, l1 word length
//   cyclic(n) residue {k}, length min(k, n-k)
//   custom    index {i} into a user table

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace qgwb {

using Key = std::vector<std::int64_t>;

enum class WindowKind { Free, Lattice, Cyclic, Custom };

class GroupDualWindow {
public:
    static constexpr std::size_t default_cap = 200000;

    static GroupDualWindow free_group(int k, int radius, std::size_t cap = default_cap) {
        check_radius(radius);
        if (k < 1) fail(ErrorKind::Schema, "SchemaError", "free(k) needs k >= 1");
        double count = 1.0, layer = 2.0 * k;
        for (int n = 1; n <= radius; ++n) {
            count += layer;
            layer *= 2.0 * k - 1;
        }
        if (count > static_cast<double>(cap))
            fail(ErrorKind::Resource, "RadiusTooLarge", "free(" + std::to_string(k) + ") ball has " + std::to_string(count) + " elements");
        GroupDualWindow w(WindowKind::Free, "free(" + std::to_string(k) + ")", radius);
        w.param_ = k;
        std::vector<Key> frontier{Key{}};
        w.add(Key{}, 0);
        for (int n = 1; n <= radius; ++n) {
            std::vector<Key> next;
            for (const auto& word : frontier)
                for (int g = 1; g <= k; ++g)
                    for (int s : {g, -g}) {
                        if (!word.empty() && word.back() == -s) continue;
                        Key x = word;
                        x.push_back(s);
                        w.add(x, n);
                        next.push_back(std::move(x));
                    }
            frontier = std::move(next);
        }
        w.finish();
        return w;
    }

    /// Z^d with the standard generators; the ball is {x : sum |x_i| <= radius}.
    static GroupDualWindow lattice(int d, int radius, std::size_t cap = default_cap) {
        check_radius(radius);
        if (d < 1) fail(ErrorKind::Schema, "SchemaError", "Z(d) needs d >= 1");
        GroupDualWindow w(WindowKind::Lattice, "Z(" + std::to_string(d) + ")", radius);
        w.param_ = d;
        std::vector<std::pair<int, Key>> all;
        Key x(static_cast<std::size_t>(d));
        std::function<void(int, int)> rec = [&](int pos, int budget) {
            if (pos == d) {
                all.push_back({radius - budget, x});
                if (all.size() > cap) fail(ErrorKind::Resource, "RadiusTooLarge", "lattice ball exceeds cap");
                return;
            }
            for (int v = -budget; v <= budget; ++v) {
                x[pos] = v;
                rec(pos + 1, budget - std::abs(v));
            }
        };
        rec(0, radius);
        std::sort(all.begin(), all.end());
        for (auto& [len, key] : all) w.add(key, len);
        w.finish();
        return w;
    }

    static GroupDualWindow cyclic(int n, int radius) {
        check_radius(radius);
        if (n < 1) fail(ErrorKind::Schema, "SchemaError", "cyclic(n) needs n >= 1");
        GroupDualWindow w(WindowKind::Cyclic, "cyclic(" + std::to_string(n) + ")", radius);
        w.param_ = n;
        std::vector<std::pair<int, Key>> all;
        for (int k = 0; k < n; ++k) {
            const int len = std::min(k, n - k);
            if (len <= radius) all.push_back({len, Key{k}});
        }
        std::sort(all.begin(), all.end());
        for (auto& [len, key] : all) w.add(key, len);
        w.finish();
        return w;
    }

    /// table[g*n+h] is the product index or -1 when it falls outside the window; element 0 is e.
    static GroupDualWindow custom(const std::string& label, std::size_t n, std::vector<long> table, std::vector<int> lengths,
                                  int radius) {
        check_radius(radius);
        if (table.size() != n * n || lengths.size() != n || n == 0)
            fail(ErrorKind::Schema, "SchemaError", "custom window: table must be n*n and lengths n");
        GroupDualWindow w(WindowKind::Custom, label, radius);
        w.table_ = std::move(table);
        for (std::size_t i = 0; i < n; ++i) w.add(Key{static_cast<std::int64_t>(i)}, lengths[i]);
        w.finish();
        return w;
    }

    /// "free(k)", "Z(d)", "cyclic(n)".
    static GroupDualWindow parse(const std::string& name, int radius) {
        auto arg = [&](const std::string& prefix) -> int {
            if (name.rfind(prefix + "(", 0) != 0 || name.back() != ')') return -1;
            const std::string mid = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
            if (mid.empty() || mid.find_first_not_of("0123456789") != std::string::npos) return -1;
            return std::stoi(mid);
        };
        if (int k = arg("free"); k >= 1) return free_group(k, radius);
        if (int d = arg("Z"); d >= 1) return lattice(d, radius);
        if (int n = arg("cyclic"); n >= 1) return cyclic(n, radius);
        fail(ErrorKind::Schema, "UnknownPreset", "no window family named " + name);
    }

    static bool is_window_name(const std::string& name) {
        return name.rfind("free(", 0) == 0 || name.rfind("Z(", 0) == 0 || name.rfind("cyclic(", 0) == 0;
    }

    WindowKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    int radius() const { return radius_; }
    std::size_t size() const { return keys_.size(); }
    std::size_t identity() const { return 0; }
    const Key& element(std::size_t i) const { return keys_[i]; }
    int length(std::size_t i) const { return lengths_[i]; }
    std::size_t inverse(std::size_t i) const { return inverse_[i]; }
    /// All irreps of a group dual are one-dimensional.
    std::size_t max_irrep_dim() const { return 1; }

    std::optional<std::size_t> find(const Key& k) const {
        auto it = index_.find(k);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// gh, or nullopt when it leaves the window.
    std::optional<std::size_t> product(std::size_t g, std::size_t h) const {
        switch (kind_) {
            case WindowKind::Free: {
                Key x = keys_[g];
                for (auto s : keys_[h]) {
                    if (!x.empty() && x.back() == -s)
                        x.pop_back();
                    else
                        x.push_back(s);
                }
                return find(x);
            }
            case WindowKind::Lattice: {
                Key x = keys_[g];
                for (std::size_t i = 0; i < x.size(); ++i) x[i] += keys_[h][i];
                return find(x);
            }
            case WindowKind::Cyclic:
                return find(Key{(keys_[g][0] + keys_[h][0]) % param_});
            case WindowKind::Custom: {
                const long v = table_[g * size() + h];
                if (v < 0) return std::nullopt;
                return static_cast<std::size_t>(v);
            }
        }
        return std::nullopt;
    }

    /// gh, raising WindowTruncation when undefined.
    std::size_t mul(std::size_t g, std::size_t h) const {
        auto p = product(g, h);
        if (!p) fail(ErrorKind::Resource, "WindowTruncation", "product " + name(g) + " * " + name(h) + " leaves the window");
        return *p;
    }

    /// Indices of the elements of length <= r, in window order.
    std::vector<std::size_t> ball(int r) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (lengths_[i] <= r) out.push_back(i);
        return out;
    }

    std::string name(std::size_t i) const {
        const Key& k = keys_[i];
        if (kind_ == WindowKind::Free) {
            if (k.empty()) return "e";
            std::string s;
            for (std::size_t p = 0; p < k.size();) {
                std::size_t q = p;
                while (q < k.size() && k[q] == k[p]) ++q;
                if (!s.empty()) s += ' ';
                s += "g" + std::to_string(std::abs(k[p]));
                const long e = static_cast<long>(q - p) * (k[p] > 0 ? 1 : -1);
                if (e != 1) s += "^" + std::to_string(e);
                p = q;
            }
            return s;
        }
        if (k.size() == 1) return std::to_string(k[0]);
        std::string s = "(";
        for (std::size_t p = 0; p < k.size(); ++p) s += (p ? "," : "") + std::to_string(k[p]);
        return s + ")";
    }

    /// Descriptions of violated window invariants (empty when all hold). Associativity is checked
    /// on all triples from the ball of radius floor(r/3).
    std::vector<std::string> invariant_violations() const {
        std::vector<std::string> bad;
        if (lengths_[0] != 0) bad.push_back("identity has nonzero length");
        for (std::size_t g = 0; g < size(); ++g) {
            if (inverse_[g] == size()) {
                bad.push_back("no inverse for " + name(g));
                continue;
            }
            if (inverse_[inverse_[g]] != g) bad.push_back("inverse not involutive at " + name(g));
            if (lengths_[inverse_[g]] != lengths_[g]) bad.push_back("inverse changes length at " + name(g));
            auto eg = product(0, g), ge = product(g, 0);
            if (!eg || *eg != g || !ge || *ge != g) bad.push_back("identity law fails at " + name(g));
        }
        for (std::size_t g = 0; g < size(); ++g)
            for (std::size_t h = 0; h < size(); ++h)
                if (lengths_[g] + lengths_[h] <= radius_ && !product(g, h))
                    bad.push_back("product undefined within radius: " + name(g) + " * " + name(h));
        const auto b = ball(radius_ / 3);
        for (auto x : b)
            for (auto y : b)
                for (auto z : b) {
                    auto xy = product(x, y), yz = product(y, z);
                    if (!xy || !yz) continue;
                    auto l = product(*xy, z), r = product(x, *yz);
                    if (l && r && *l != *r) bad.push_back("associativity fails at " + name(x) + ", " + name(y) + ", " + name(z));
                }
        return bad;
    }

private:
    GroupDualWindow(WindowKind kind, std::string label, int radius) : kind_(kind), label_(std::move(label)), radius_(radius) {}

    static void check_radius(int r) {
        if (r < 1) fail(ErrorKind::Schema, "SchemaError", "window radius must be >= 1");
    }

    void add(Key k, int len) {
        index_.emplace(k, keys_.size());
        keys_.push_back(std::move(k));
        lengths_.push_back(len);
    }

    void finish() {
        const std::size_t n = size();
        inverse_.assign(n, n);
        for (std::size_t g = 0; g < n; ++g) {
            std::optional<std::size_t> inv;
            switch (kind_) {
                case WindowKind::Free: {
                    Key x(keys_[g].rbegin(), keys_[g].rend());
                    for (auto& s : x) s = -s;
                    inv = find(x);
                    break;
                }
                case WindowKind::Lattice: {
                    Key x = keys_[g];
                    for (auto& s : x) s = -s;
                    inv = find(x);
                    break;
                }
                case WindowKind::Cyclic:
                    inv = find(Key{(param_ - keys_[g][0]) % param_});
                    break;
                case WindowKind::Custom:
                    for (std::size_t h = 0; h < n; ++h)
                        if (auto p = product(g, h); p && *p == 0) inv = h;
                    break;
            }
            if (inv) inverse_[g] = *inv;
        }
    }

    WindowKind kind_;
    std::string label_;
    int radius_;
    std::int64_t param_ = 0;
    std::vector<Key> keys_;
    std::vector<int> lengths_;
    std::vector<std::size_t> inverse_;
    std::map<Key, std::size_t> index_;
    std::vector<long> table_;
};

}  // namespace qgwb
