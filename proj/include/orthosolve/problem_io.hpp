#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "orthosolve/problem.hpp"

namespace orthosolve {

// Landmark list: n lines of "x y" decimals, no header.
inline void write_points(const std::string& path, const Matrix& points) {
    if (points.cols() != 2) throw ShapeMismatch("write_points: points must be n x 2");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    for (int i = 0; i < points.rows(); ++i)
        f << format_real(points(i, 0)) << ' ' << format_real(points(i, 1)) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

inline Matrix read_points(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    std::vector<double> xs, ys;
    double x, y;
    while (f >> x >> y) {
        xs.push_back(x);
        ys.push_back(y);
    }
    if (xs.empty()) throw IoError("no landmarks in " + path);
    Matrix points(static_cast<int>(xs.size()), 2);
    for (int i = 0; i < points.rows(); ++i) {
        points(i, 0) = xs[i];
        points(i, 1) = ys[i];
    }
    return points;
}

inline nlohmann::json set_to_json(const PrimalSet& set) {
    return nlohmann::json{{"kind", set.kind_name()},
                          {"param", set.param},
                          {"op_radius", set.declared_op_radius}};
}

inline PrimalSet set_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double param = j.at("param").get<double>();
    const double op_radius = j.at("op_radius").get<double>();
    if (kind == "box") return PrimalSet::box(param, op_radius);
    if (kind == "fball") return PrimalSet::frobenius_ball(param, op_radius);
    throw ConfigError("unknown primal set kind '" + kind + "'");
}

// Problem directory: meta.json plus matrix files in the plain-text format.
inline void save_problem(const std::string& dir, const Problem& p) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + dir);

    nlohmann::json meta{{"kind", p.kind},       {"m", p.m},
                        {"n", p.n},             {"mu", p.mu},
                        {"seed", p.seed},       {"L_ell", p.smooth_grad_lipschitz},
                        {"L_g", p.nonsmooth_lipschitz}, {"set", set_to_json(p.primal_set)}};
    if (p.kind == "spca") meta["p"] = p.spca_p;

    if (const auto* qp = std::get_if<QpPayload>(&p.payload)) {
        write_matrix(dir + "/A.txt", qp->A.matrix());
        write_matrix(dir + "/G.txt", qp->G);
    } else if (const auto* spca = std::get_if<SpcaPayload>(&p.payload)) {
        write_matrix(dir + "/AtA.txt", spca->AtA.matrix());
    } else {
        const auto& gm = std::get<GmPayload>(p.payload);
        write_matrix(dir + "/K.txt", gm.K.matrix());
        write_points(dir + "/points1.txt", gm.points1);
        write_points(dir + "/points2.txt", gm.points2);
    }

    std::ofstream f(dir + "/meta.json", std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + dir + "/meta.json");
    f << meta.dump(2) << '\n';
    if (!f) throw IoError("write failed: " + dir + "/meta.json");
}

inline Problem load_problem(const std::string& dir) {
    std::ifstream f(dir + "/meta.json");
    if (!f) throw IoError("cannot open: " + dir + "/meta.json");
    nlohmann::json meta;
    try {
        f >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad meta.json in " + dir + ": " + e.what());
    }

    Problem p;
    try {
        p.kind = meta.at("kind").get<std::string>();
        p.m = meta.at("m").get<int>();
        p.n = meta.at("n").get<int>();
        p.mu = meta.at("mu").get<double>();
        p.seed = meta.at("seed").get<std::uint64_t>();
        p.smooth_grad_lipschitz = meta.at("L_ell").get<double>();
        p.nonsmooth_lipschitz = meta.at("L_g").get<double>();
        p.primal_set = set_from_json(meta.at("set"));
        if (meta.contains("p")) p.spca_p = meta.at("p").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad meta.json in " + dir + ": " + e.what());
    }

    if (p.kind == "qp") {
        QpPayload payload{sym(read_matrix(dir + "/A.txt")), read_matrix(dir + "/G.txt")};
        if (payload.A.dim() != p.m || payload.G.rows() != p.m || payload.G.cols() != p.n)
            throw IoError("inconsistent matrix shapes in " + dir);
        p.payload = std::move(payload);
    } else if (p.kind == "spca") {
        SpcaPayload payload{sym(read_matrix(dir + "/AtA.txt"))};
        if (payload.AtA.dim() != p.m) throw IoError("inconsistent matrix shapes in " + dir);
        p.payload = std::move(payload);
    } else if (p.kind == "gm") {
        GmPayload payload{sym(read_matrix(dir + "/K.txt")), read_points(dir + "/points1.txt"),
                          read_points(dir + "/points2.txt")};
        if (payload.K.dim() != p.n) throw IoError("inconsistent matrix shapes in " + dir);
        p.payload = std::move(payload);
    } else {
        throw IoError("unknown problem kind '" + p.kind + "' in " + dir);
    }
    return p;
}

}  // namespace orthosolve
