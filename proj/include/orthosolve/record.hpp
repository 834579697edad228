#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "orthosolve/matrix.hpp"

namespace orthosolve {

enum class RunStatus { Converged, Budget, Diverged };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Converged: return "converged";
        case RunStatus::Budget: return "budget";
        case RunStatus::Diverged: return "diverged";
    }
    return "unknown";
}

struct IterationRow {
    long iter = 0;
    double obj = 0.0;
    double feas = 0.0;
    double kkt = 0.0;
    double dx = 0.0;
    double dz_gap = 0.0;
    double dy = 0.0;
    double elapsed_ms = 0.0;
};

// Diagnostics of one solve: per-iteration rows at the configured cadence plus
// terminal quantities. Also carries the final iterates so downstream tooling
// (rounding, sparsity, serialization) does not need to re-run anything.
struct RunRecord {
    std::vector<IterationRow> rows;
    RunStatus status = RunStatus::Budget;
    long total_iters = 0;
    double final_obj = 0.0;
    double final_feas = 0.0;
    double final_kkt = 0.0;
    double stationarity_bound = 0.0;
    double wall_ms = 0.0;
    Matrix final_X;
    SymMatrix final_Y;
    Matrix final_Z;
    long invariant_checks = 0;
    long invariant_violations = 0;
    std::vector<std::string> invariant_notes;  // first few violation descriptions
};

inline void write_run_csv(std::ostream& os, const RunRecord& rec, bool no_timing = false) {
    os << "iter,obj,feas,kkt,dx,dz_gap,dy,elapsed_ms\n";
    for (const auto& row : rec.rows) {
        os << row.iter << ',' << format_real(row.obj) << ',' << format_real(row.feas) << ','
           << format_real(row.kkt) << ',' << format_real(row.dx) << ','
           << format_real(row.dz_gap) << ',' << format_real(row.dy) << ','
           << format_real(no_timing ? 0.0 : row.elapsed_ms) << '\n';
    }
}

inline void write_run_csv(const std::string& path, const RunRecord& rec, bool no_timing = false) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_run_csv(f, rec, no_timing);
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace orthosolve
