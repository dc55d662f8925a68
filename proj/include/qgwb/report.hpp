#pragma once

// Experiment reports: every number is a check carrying its relation, reference, tolerance and verdict.

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "error.hpp"

namespace qgwb {

struct Check {
    std::string section;
    std::string item;
    std::string label;     // stage, element or object the number belongs to
    double value;
    std::string relation;  // "<=", ">=", "==", "true", "finite"
    double ref;
    double tol;
    bool pass;
};

class Report {
public:
    Report(std::string experiment, std::string parent_id, double tol_scale = 1.0)
        : experiment_(std::move(experiment)), parent_(std::move(parent_id)), scale_(tol_scale) {}

    void param(const std::string& k, const std::string& v) { params_[k] = v; }
    void override_tol(const std::string& item, double tol) { overrides_[item] = tol; }

    /// value <= tol
    bool le(const std::string& section, const std::string& item, const std::string& label, double value, double tol) {
        const double t = tol_for(item, tol);
        return push({section, item, label, value, "<=", 0.0, t, std::isfinite(value) && value <= t});
    }
    /// value >= ref - tol (+inf passes)
    bool ge(const std::string& section, const std::string& item, const std::string& label, double value, double ref, double tol) {
        const double t = tol_for(item, tol);
        return push({section, item, label, value, ">=", ref, t, !std::isnan(value) && value >= ref - t});
    }
    /// |value - ref| <= tol
    bool eq(const std::string& section, const std::string& item, const std::string& label, double value, double ref, double tol) {
        const double t = tol_for(item, tol);
        return push({section, item, label, value, "==", ref, t, std::isfinite(value) && std::abs(value - ref) <= t});
    }
    bool flag(const std::string& section, const std::string& item, const std::string& label, bool v) {
        return push({section, item, label, v ? 1.0 : 0.0, "true", 1.0, 0.0, v});
    }
    /// Descriptive quantity: passes when finite.
    bool info(const std::string& section, const std::string& item, const std::string& label, double value) {
        return push({section, item, label, value, "finite", 0.0, 0.0, std::isfinite(value)});
    }

    void set_error(const Error& e) {
        error_ = true;
        error_code_ = e.code();
        error_detail_ = e.what();
        error_kind_ = e.kind();
    }

    const std::vector<Check>& checks() const { return checks_; }
    bool all_pass() const {
        for (const auto& c : checks_)
            if (!c.pass) return false;
        return !error_;
    }
    bool has_error() const { return error_; }
    ErrorKind error_kind() const { return error_kind_; }

    /// 0 when everything passed, otherwise the exit code of the error or of a contract failure.
    int exit_status() const {
        if (error_) return exit_code(error_kind_);
        return all_pass() ? 0 : exit_code(ErrorKind::Contract);
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["experiment"] = experiment_;
        j["parent_id"] = parent_;
        j["parameters"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : params_) j["parameters"][k] = v;
        auto rows = nlohmann::ordered_json::array();
        for (const auto& c : checks_) {
            nlohmann::ordered_json r;
            r["section"] = c.section;
            r["item"] = c.item;
            r["label"] = c.label;
            r["value"] = num(c.value);
            r["relation"] = c.relation;
            r["ref"] = num(c.ref);
            r["tol"] = num(c.tol);
            r["pass"] = c.pass;
            rows.push_back(std::move(r));
        }
        j["checks"] = rows;
        std::vector<std::string> failed;
        for (const auto& c : checks_)
            if (!c.pass) failed.push_back(c.section + "/" + c.item + (c.label.empty() ? "" : "[" + c.label + "]"));
        j["failed"] = failed;
        if (error_) j["error"] = {{"code", error_code_}, {"detail", error_detail_}};
        j["status"] = error_ ? "error" : (all_pass() ? "pass" : "fail");
        return j;
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "section,item,label,value,relation,ref,tol,pass\n";
        for (const auto& c : checks_)
            out << csv(c.section) << ',' << csv(c.item) << ',' << csv(c.label) << ',' << fmt(c.value) << ',' << c.relation << ','
                << fmt(c.ref) << ',' << fmt(c.tol) << ',' << (c.pass ? "true" : "false") << '\n';
        return out.str();
    }

private:
    double tol_for(const std::string& item, double tol) const {
        if (auto it = overrides_.find(item); it != overrides_.end()) return it->second;
        return tol * scale_;
    }
    bool push(Check c) {
        checks_.push_back(std::move(c));
        return checks_.back().pass;
    }
    static nlohmann::ordered_json num(double v) {
        if (std::isfinite(v)) return v;
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    static std::string csv(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }

    std::string experiment_, parent_;
    double scale_;
    std::map<std::string, std::string> params_;
    std::map<std::string, double> overrides_;
    std::vector<Check> checks_;
    bool error_ = false;
    std::string error_code_, error_detail_;
    ErrorKind error_kind_ = ErrorKind::Contract;
};

}  // namespace qgwb
