#pragma once

#include <string>

#include "tmscat/diagnostics.hpp"
#include "tmscat/types.hpp"

namespace tmscat {

// 2-norm condition number via SVD.
double condition_number(const CMatrix& A);

// Where LU solves report to. Null record: no bookkeeping.
struct SolveLog {
  LayerSolveRecord* record = nullptr;
  bool conditions = true;  // SVD per inverted matrix (O(n^3), skip for large runs)

  void note(const std::string& label, const CMatrix& A) const;
  void add_flops(double f) const {
    if (record) record->flops += f;
  }
};

// A^{-1} B by partial-pivot LU. Throws SingularMatrixError(label) when the
// reciprocal condition estimate collapses.
CMatrix lu_solve(const CMatrix& A, const CMatrix& B, const std::string& label, const SolveLog& log = {});

// B A^{-1}, through the transposed factorization.
CMatrix lu_solve_right(const CMatrix& A, const CMatrix& B, const std::string& label,
                       const SolveLog& log = {});

// Product with flop bookkeeping.
CMatrix matmul(const CMatrix& A, const CMatrix& B, const SolveLog& log);

}  // namespace tmscat
