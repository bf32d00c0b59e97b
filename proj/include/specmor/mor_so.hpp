#ifndef SPECMOR_MOR_SO_HPP
#define SPECMOR_MOR_SO_HPP

#include <specmor/equations.hpp>
#include <specmor/options.hpp>
#include <specmor/system.hpp>

#include <string>
#include <vector>

namespace specmor
{

/// Registered balancing formulas: p, pm, pv, vp, vpm, v, fv, so.
const std::vector<std::string>& so_formulas();

///
/// Position and velocity row blocks of the Gramian factors of the
/// first-order realization E = diag(I, M), A = [0 I; -K -E]:
/// P = R R^T with R = [rp; rv], and the E-weighted Q = L L^T with
/// L = [lp; lv]. The velocity observability block of the standard form is
/// lvm = M^T lv.
///
struct SoGramianBlocks
{
    Matrix rp, rv, lp, lv, lvm;
    std::string kind; // "bt", "flbt" or "tlbt"
    InfoTree info;
};

/// One Lyapunov pair on the first-order realization, or the limited pair
/// when opts.limited is "frequency" or "time". Every call increments the
/// counter reported by so_gramian_computations().
SoGramianBlocks so_gramian_blocks(const SecondOrderSystem& so, const OptionTree& opts = {});

long so_gramian_computations();

struct SoReduction
{
    SecondOrderSystem rom;
    Vector hsv;
    Matrix w, t;
    InfoTree info;
};

///
/// Structure-preserving truncation M^ = W^T M T, E^ = W^T E T, K^ = W^T K T,
/// Bu^ = W^T Bu, Cp^ = Cp T, Cv^ = Cv T with the pair (W, T) given by the
/// formula:
///
///   p    SVD(lp^T rp)         pm   SVD(lp^T M rp)
///   v    SVD(lvm^T rv)        fv   SVD(lv^T rv)
///   pv   SVD(lvm^T rp)        vp   SVD(lp^T rv)
///   vpm  SVD(lp^T M rv)       so   W from v, T from p
///
/// T = X V_r S_r^{-1/2}, W = Y U_r S_r^{-1/2} for SVD(Y^T X) = U S V^T. With
/// one_sided set, W = T = orth(T).
///
/// Throws Error(FormulaUnknown) and Error(OrderTooLarge).
///
SoReduction so_balanced_truncate(const SecondOrderSystem& so, const SoGramianBlocks& blocks,
                                 const std::string& formula, const OptionTree& opts = {});

/// Computes the blocks (counted) and truncates with opts.formula.
SoReduction so_reduce(const SecondOrderSystem& so, const OptionTree& opts = {});

/// Limited variant: blocks from the frequency or time-limited Gramians.
SoReduction so_limited_truncate(const SecondOrderSystem& so, const std::string& formula, const LimitedMode& mode,
                                const OptionTree& opts = {});

/// Every registered formula from one block computation.
std::vector<SoReduction> so_reduce_all(const SecondOrderSystem& so, const OptionTree& opts = {});

} // namespace specmor

#endif // SPECMOR_MOR_SO_HPP
