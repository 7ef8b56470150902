#ifndef COLLMEM_IO_HPP
#define COLLMEM_IO_HPP

// JSON and CSV forms of profiles, grids, operators and fidelity reports.

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "collmem/error.hpp"
#include "collmem/fidelity.hpp"
#include "collmem/hilbert.hpp"
#include "collmem/modes.hpp"

namespace collmem {

using json = nlohmann::json;

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::size_t line = 0, std::size_t column = 0) {
    const auto first = text.find_first_not_of(" \t\r");
    const auto last = text.find_last_not_of(" \t\r");
    if (first == std::string_view::npos) throw ParseError("empty numeric field", line, column);
    text = text.substr(first, last - first + 1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("not a number: '" + std::string(text) + "'", line, column + first);
    return v;
}

// ---- profiles ---------------------------------------------------------------

inline json amplitudes_to_json(std::span<const complex> amps) {
    json out = json::array();
    for (const auto& a : amps) out.push_back({a.real(), a.imag()});
    return out;
}

inline json profile_to_json(const CouplingProfile& p) { return amplitudes_to_json(p.amplitudes()); }

inline CouplingProfile profile_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("profile must be a JSON array of [re, im] pairs", 0, 0);
    std::vector<complex> amps;
    amps.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        if (e.is_number()) {
            amps.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            amps.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
            throw ParseError("profile entry " + std::to_string(i) + " is not an [re, im] pair", 0, 0);
        }
    }
    return CouplingProfile(std::move(amps));
}

/// {overlap, ghat_amplitudes}; ghat amplitudes are rms-normalized.
inline json pair_to_json(const OrthogonalModePair& pair) {
    json out;
    out["overlap"] = pair.overlap;
    out["ghat_amplitudes"] = profile_to_json(pair.profile_ghat);
    if (pair.h_phase != 0.0) out["h_phase"] = pair.h_phase;
    return out;
}

// ---- wavefunction grids -----------------------------------------------------

inline constexpr std::string_view kGridHeader = "x,y,density_g,density_h,weight";

/// Reads the five-column grid CSV. A header row naming the columns is
/// accepted and skipped; blank lines are ignored.
inline GridPair read_grid_csv(std::istream& in) {
    std::vector<Point2> points;
    std::vector<double> rho_g, rho_h, weights;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto lead = line.find_first_not_of(" \t");
        if (points.empty() && std::isalpha(static_cast<unsigned char>(line[lead]))) continue;
        double fields[5];
        std::size_t start = 0;
        for (int k = 0; k < 5; ++k) {
            const auto comma = line.find(',', start);
            if (k < 4 && comma == std::string::npos)
                throw ParseError("expected 5 comma-separated fields, found " + std::to_string(k + 1), line_no,
                                 line.size() + 1);
            if (k == 4 && comma != std::string::npos)
                throw ParseError("expected 5 comma-separated fields, found more", line_no, comma + 1);
            const auto end = k < 4 ? comma : line.size();
            fields[k] = parse_double(std::string_view(line).substr(start, end - start), line_no, start + 1);
            if (k >= 2 && fields[k] < 0.0)
                throw ParseError("density and weight columns must be nonnegative", line_no, start + 1);
            start = end + 1;
        }
        points.push_back({fields[0], fields[1]});
        rho_g.push_back(fields[2]);
        rho_h.push_back(fields[3]);
        weights.push_back(fields[4]);
    }
    if (points.empty()) throw ParseError("grid file contains no data rows", line_no == 0 ? 1 : line_no, 1);
    return GridPair{WavefunctionGrid(points, std::move(rho_g), weights),
                    WavefunctionGrid(std::move(points), std::move(rho_h), std::move(weights))};
}

inline void write_grid_csv(std::ostream& out, const GridPair& grids) {
    if (grids.g.size() != grids.h.size()) throw DimensionError("grid pair differs in length");
    out << kGridHeader << '\n';
    const auto pts = grids.g.points();
    for (std::size_t i = 0; i < grids.g.size(); ++i) {
        out << format_double(pts[i].x) << ',' << format_double(pts[i].y) << ',' << format_double(grids.g.densities()[i])
            << ',' << format_double(grids.h.densities()[i]) << ',' << format_double(grids.g.weights()[i]) << '\n';
    }
}

// ---- operators --------------------------------------------------------------

/// {basis_cutoff, rows: [[[re, im], ...], ...]}.
inline json operator_to_json(const Operator& op) {
    json rows = json::array();
    const Matrix& m = op.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return json{{"basis_cutoff", op.basis()->cutoff()}, {"rows", std::move(rows)}};
}

inline Operator operator_from_json(const json& j) {
    if (!j.contains("basis_cutoff") || !j.contains("rows")) throw ParseError("operator JSON needs basis_cutoff and rows", 0, 0);
    const auto basis = build_basis(j.at("basis_cutoff").get<int>());
    const auto n = static_cast<Eigen::Index>(basis->size());
    const auto& rows = j.at("rows");
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
        throw ParseError("operator JSON row count does not match the basis", 0, 0);
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw ParseError("operator JSON row " + std::to_string(r) + " has the wrong length", 0, 0);
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            m(r, c) = complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return Operator(basis, std::move(m));
}

// ---- fidelity reports -------------------------------------------------------

inline constexpr std::string_view kReportHeader = "s,N,tau,T,F,Fc,p_herald";

inline json report_to_json(const FidelityReport& r) {
    json out;
    out["s"] = r.overlap;
    out["N"] = r.cycles;
    out["tau"] = r.tau;
    out["T"] = r.total;
    out["F"] = r.fidelity;
    out["Fc"] = r.conditional_fidelity;
    out["p_herald"] = r.herald;
    return out;
}

inline FidelityReport report_from_json(const json& j) {
    return {j.at("s").get<double>(),  j.at("N").get<int>(),   j.at("tau").get<double>(),     j.at("T").get<double>(),
            j.at("F").get<double>(),  j.at("Fc").get<double>(), j.at("p_herald").get<double>()};
}

inline std::string report_csv_row(const FidelityReport& r) {
    return format_double(r.overlap) + ',' + std::to_string(r.cycles) + ',' + format_double(r.tau) + ',' +
           format_double(r.total) + ',' + format_double(r.fidelity) + ',' + format_double(r.conditional_fidelity) +
           ',' + format_double(r.herald);
}

inline void write_reports_csv(std::ostream& out, const std::vector<FidelityReport>& reports) {
    out << kReportHeader << '\n';
    for (const auto& r : reports) out << report_csv_row(r) << '\n';
}

inline void write_reports_json(std::ostream& out, const std::vector<FidelityReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    out << arr.dump(2) << '\n';
}

inline std::vector<FidelityReport> read_reports_csv(std::istream& in) {
    std::vector<FidelityReport> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != kReportHeader) throw ParseError("expected header '" + std::string(kReportHeader) + "'", 1, 1);
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        const std::string_view view(line);
        while (true) {
            const auto comma = view.find(',', start);
            fields.push_back(view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 7) throw ParseError("expected 7 fields, found " + std::to_string(fields.size()), line_no, 1);
        std::size_t col = 1;
        std::vector<double> v;
        for (auto f : fields) {
            v.push_back(parse_double(f, line_no, col));
            col += f.size() + 1;
        }
        if (v[1] != std::floor(v[1])) throw ParseError("cycle count must be an integer", line_no, fields[0].size() + 2);
        out.push_back({v[0], static_cast<int>(v[1]), v[2], v[3], v[4], v[5], v[6]});
    }
    return out;
}

}  // namespace collmem

#endif  // COLLMEM_IO_HPP
