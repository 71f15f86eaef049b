//! Operators built from problems and the structural validators: objective
//! Hamiltonian, feasible-subspace restriction, phase-separator check,
//! mixer check (feasibility preservation + entrywise non-negativity +
//! irreducibility), mixing families and their joint-irreducibility check,
//! and the Perron top eigenstate.
//!
//! Irreducibility is decided as graph connectivity: for a Hermitian matrix
//! the nonzero pattern is symmetric, so the absence of proper invariant
//! coordinate subspaces is equivalent to connectivity of the undirected
//! graph with an edge wherever the restricted entry magnitude exceeds the
//! zero threshold. A brute-force subspace-enumeration oracle for this
//! equivalence lives in [`crate::oracles`].

use crate::doc::{MixerDoc, ProblemDocument};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, C64, ComplexMatrix, ComplexVector};
use crate::problems::{bit_of, validate_one_hot_groups, Cop, SolutionReport};
use crate::tol::Tolerances;

/// Ordered list of feasible computational-basis indices; defines the
/// restriction map onto span{|z⟩ : z feasible}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleSubspace {
    n: usize,
    basis_indices: Vec<usize>,
}

impl FeasibleSubspace {
    pub fn from_indices(n: usize, basis_indices: Vec<usize>) -> Result<Self> {
        if basis_indices.is_empty() {
            return Err(Error::Contract("feasible subspace must be non-empty".into()));
        }
        let dim = 1usize << n;
        for w in basis_indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Contract(
                    "basis indices must be strictly ascending".into(),
                ));
            }
        }
        if *basis_indices.last().unwrap() >= dim {
            return Err(Error::Contract(format!(
                "basis index {} out of range for {n} qubits",
                basis_indices.last().unwrap()
            )));
        }
        Ok(Self { n, basis_indices })
    }

    pub fn from_report(n: usize, report: &SolutionReport) -> Self {
        Self {
            n,
            basis_indices: report.feasible_indices.clone(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis_indices: (0..(1usize << n)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_s(&self) -> usize {
        self.basis_indices.len()
    }

    pub fn basis_indices(&self) -> &[usize] {
        &self.basis_indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.basis_indices.binary_search(&index).is_ok()
    }

    /// Subspace position of a full-space basis index.
    pub fn position_of(&self, index: usize) -> Option<usize> {
        self.basis_indices.binary_search(&index).ok()
    }

    /// Maps full-space indices to subspace positions, erroring on indices
    /// outside the subspace.
    pub fn positions_of(&self, indices: &[usize]) -> Result<Vec<usize>> {
        indices
            .iter()
            .map(|&i| {
                self.position_of(i).ok_or_else(|| {
                    Error::Contract(format!("index {i} is not in the feasible subspace"))
                })
            })
            .collect()
    }

    /// Embeds a subspace vector into the full 2^n-dimensional space; all
    /// amplitudes outside the subspace are exactly zero.
    pub fn embed(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(v.dim(), self.dim_s(), "embed dimension mismatch");
        let mut full = ComplexVector::zeros(1usize << self.n);
        for (pos, &index) in self.basis_indices.iter().enumerate() {
            full.set(index, v.get(pos));
        }
        full
    }
}

/// A Hermitian operator restricted to a feasible subspace.
#[derive(Debug, Clone)]
pub struct RestrictedOperator {
    pub subspace: FeasibleSubspace,
    pub matrix: ComplexMatrix,
}

impl RestrictedOperator {
    pub fn dim(&self) -> usize {
        self.subspace.dim_s()
    }
}

/// Outcome of the three mixer conditions, with the measured witnesses.
#[derive(Debug, Clone)]
pub struct MixerVerdict {
    pub feasibility_preserving: bool,
    /// Largest coupling magnitude from the subspace to its complement.
    pub max_leakage: f64,
    pub entrywise_nonneg: bool,
    /// Most negative real part found among restricted entries.
    pub most_negative_entry: f64,
    /// Largest imaginary part magnitude among restricted entries.
    pub max_imag_entry: f64,
    pub irreducible: bool,
    /// Connected components of the restricted pattern graph, as blocks of
    /// full-space basis indices. Exactly one block iff irreducible.
    pub components: Vec<Vec<usize>>,
}

impl MixerVerdict {
    pub fn all_true(&self) -> bool {
        self.feasibility_preserving && self.entrywise_nonneg && self.irreducible
    }
}

/// A family of full-space Hermitian operators with an application order.
#[derive(Debug, Clone)]
pub struct MixingFamily {
    members: Vec<ComplexMatrix>,
    order: Vec<usize>,
}

impl MixingFamily {
    pub fn new(members: Vec<ComplexMatrix>) -> Result<Self> {
        let order = (0..members.len()).collect();
        Self::with_order(members, order)
    }

    pub fn with_order(members: Vec<ComplexMatrix>, order: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Contract("mixing family must be non-empty".into()));
        }
        let dim = members[0].rows();
        for (i, m) in members.iter().enumerate() {
            if !m.is_square() || m.rows() != dim {
                return Err(Error::Contract(format!(
                    "family member {i} has shape {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            let defect = m.hermiticity_defect();
            if defect >= crate::tol::HERMITIAN_TOL {
                return Err(Error::Contract(format!(
                    "family member {i} is not Hermitian (defect {defect:.3e})"
                )));
            }
        }
        let mut seen = vec![false; members.len()];
        for &i in &order {
            if i >= members.len() || seen[i] {
                return Err(Error::Contract("order is not a permutation of members".into()));
            }
            seen[i] = true;
        }
        if order.len() != members.len() {
            return Err(Error::Contract("order is not a permutation of members".into()));
        }
        Ok(Self { members, order })
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Members in application order σ.
    pub fn ordered_members(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.order.iter().map(|&i| &self.members[i])
    }

    /// Σ_i B_i.
    pub fn sum(&self) -> ComplexMatrix {
        let mut total = self.members[0].clone();
        for m in &self.members[1..] {
            total = total.add(m);
        }
        total
    }
}

/// Per-member and joint verdict for a candidate mixing family.
#[derive(Debug, Clone)]
pub struct FamilyVerdict {
    pub member_feasibility_preserving: Vec<bool>,
    pub member_entrywise_nonneg: Vec<bool>,
    pub jointly_irreducible: bool,
    /// Connected components of the union pattern graph (basis indices).
    pub union_components: Vec<Vec<usize>>,
}

impl FamilyVerdict {
    pub fn is_mixing_family(&self) -> bool {
        self.member_feasibility_preserving.iter().all(|&b| b)
            && self.member_entrywise_nonneg.iter().all(|&b| b)
            && self.jointly_irreducible
    }
}

/// Diagonal operator with f(z) at index(z).
pub fn objective_hamiltonian(p: &Cop) -> ComplexMatrix {
    ComplexMatrix::diag_real(p.objective_table())
}

/// Transverse field Σ_k σx^(k): ones exactly between indices at Hamming
/// distance one.
pub fn transverse_field(n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let mut b = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for k in 0..n {
            let j = i ^ (1usize << (n - 1 - k));
            b.set(i, j, C64::new(1.0, 0.0));
        }
    }
    b
}

/// Single-qubit σx on `qubit`, as a full-space operator.
pub fn sigma_x_on(n: usize, qubit: usize) -> ComplexMatrix {
    assert!(qubit < n);
    let dim = 1usize << n;
    let mut b = ComplexMatrix::zeros(dim, dim);
    let mask = 1usize << (n - 1 - qubit);
    for i in 0..dim {
        b.set(i, i ^ mask, C64::new(1.0, 0.0));
    }
    b
}

/// Swap coupling (σxσx + σyσy)/2 on qubits `a`, `b`: exchanges the two
/// bits whenever they differ, with matrix entry 1.
pub fn xy_swap_on(n: usize, a: usize, b: usize) -> ComplexMatrix {
    assert!(a < n && b < n && a != b);
    let dim = 1usize << n;
    let mask = (1usize << (n - 1 - a)) | (1usize << (n - 1 - b));
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        if bit_of(i, a, n) != bit_of(i, b, n) {
            m.set(i, i ^ mask, C64::new(1.0, 0.0));
        }
    }
    m
}

/// A mixing family of XY swap terms acting within each one-hot group:
/// the single pair for a group of two, the adjacent-pair ring otherwise.
/// Every member preserves Hamming weight inside its group, so the one-hot
/// feasible subspace is preserved exactly.
pub fn builtin_xy_mixing_family(n: usize, groups: &[Vec<usize>]) -> Result<MixingFamily> {
    validate_one_hot_groups(n, groups)?;
    let mut members = Vec::new();
    for group in groups {
        if group.len() == 2 {
            members.push(xy_swap_on(n, group[0], group[1]));
        } else {
            for i in 0..group.len() {
                members.push(xy_swap_on(n, group[i], group[(i + 1) % group.len()]));
            }
        }
    }
    MixingFamily::new(members)
}

/// Builds the mixing family named by a problem document.
pub fn mixing_family_from_doc(doc: &ProblemDocument) -> Result<MixingFamily> {
    let n = doc.n;
    let mixer = doc
        .mixer
        .as_ref()
        .ok_or_else(|| Error::Document("document has no mixer section".into()))?;
    match mixer {
        MixerDoc::TransverseField => {
            MixingFamily::new((0..n).map(|k| sigma_x_on(n, k)).collect())
        }
        MixerDoc::XyOnehot => {
            let groups = match &doc.feasible {
                crate::doc::FeasibleDoc::OneHot { groups } => groups.clone(),
                _ => {
                    return Err(Error::Document(
                        "xy_onehot mixer requires one_hot feasibility groups".into(),
                    ))
                }
            };
            builtin_xy_mixing_family(n, &groups)
        }
        MixerDoc::Explicit { matrices } => {
            let dim = 1usize << n;
            let mut members = Vec::with_capacity(matrices.len());
            for (k, flat) in matrices.iter().enumerate() {
                if flat.len() != dim * dim {
                    return Err(Error::Document(format!(
                        "explicit mixer matrix {k} has {} entries, expected {}",
                        flat.len(),
                        dim * dim
                    )));
                }
                let mut m = ComplexMatrix::zeros(dim, dim);
                for (pos, &[re, im]) in flat.iter().enumerate() {
                    m.set(pos / dim, pos % dim, C64::new(re, im));
                }
                members.push(m);
            }
            MixingFamily::new(members).map_err(|e| Error::Document(e.to_string()))
        }
    }
}

/// Restriction matrix[a][b] = A[basis_indices[a]][basis_indices[b]].
pub fn restrict(a: &ComplexMatrix, s: &FeasibleSubspace) -> Result<RestrictedOperator> {
    if !a.is_square() || a.rows() != (1usize << s.n()) {
        return Err(Error::Contract(format!(
            "restrict: operator is {}x{}, expected {dim}x{dim}",
            a.rows(),
            a.cols(),
            dim = 1usize << s.n()
        )));
    }
    let defect = a.hermiticity_defect();
    if defect >= crate::tol::HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "restrict: operator is not Hermitian (defect {defect:.3e})"
        )));
    }
    let d = s.dim_s();
    let mut matrix = ComplexMatrix::zeros(d, d);
    for (ra, &ia) in s.basis_indices().iter().enumerate() {
        for (rb, &ib) in s.basis_indices().iter().enumerate() {
            matrix.set(ra, rb, a.get(ia, ib));
        }
    }
    Ok(RestrictedOperator {
        subspace: s.clone(),
        matrix,
    })
}

/// Phase-separator verdict: diagonality on the full space plus the argmax
/// set of the restricted diagonal.
#[derive(Debug, Clone)]
pub struct PhaseSeparatorVerdict {
    pub diagonal: bool,
    pub max_off_diagonal: f64,
    pub argmax_matches_optimal: bool,
    /// Argmax set actually found, as full-space basis indices.
    pub argmax_indices: Vec<usize>,
}

impl PhaseSeparatorVerdict {
    pub fn is_valid(&self) -> bool {
        self.diagonal && self.argmax_matches_optimal
    }
}

/// Positions whose values lie within `rel_tol`·spread of the maximum.
pub fn argmax_positions(values: &[f64], rel_tol: f64) -> Vec<usize> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let cutoff = max - rel_tol * (max - min);
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= cutoff)
        .map(|(i, _)| i)
        .collect()
}

/// Checks Def.-style phase-separator validity: (i) the full-space operator
/// is diagonal, (ii) the argmax set of its restricted diagonal equals
/// `optimal`.
pub fn check_phase_separator(
    h: &ComplexMatrix,
    s: &FeasibleSubspace,
    optimal: &[usize],
    tols: &Tolerances,
) -> Result<PhaseSeparatorVerdict> {
    if !h.is_square() || h.rows() != (1usize << s.n()) {
        return Err(Error::Contract(format!(
            "check_phase_separator: operator is {}x{}, expected {dim}x{dim}",
            h.rows(),
            h.cols(),
            dim = 1usize << s.n()
        )));
    }
    for &z in optimal {
        if !s.contains(z) {
            return Err(Error::Contract(format!(
                "optimal index {z} is not in the feasible subspace"
            )));
        }
    }
    let max_off_diagonal = h.max_off_diagonal();
    let diagonal = max_off_diagonal < tols.zero_entry;

    let diag: Vec<f64> = s.basis_indices().iter().map(|&i| h.get(i, i).re).collect();
    let argmax = argmax_positions(&diag, tols.argmax_rel);
    let argmax_indices: Vec<usize> = argmax.iter().map(|&p| s.basis_indices()[p]).collect();

    let mut expected = optimal.to_vec();
    expected.sort_unstable();
    let argmax_matches_optimal = argmax_indices == expected;

    Ok(PhaseSeparatorVerdict {
        diagonal,
        max_off_diagonal,
        argmax_matches_optimal,
        argmax_indices,
    })
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            self.parent[x] = self.find(self.parent[x]);
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
        } else if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra;
        } else {
            self.parent[rb] = ra;
            self.rank[ra] += 1;
        }
    }
}

/// Connected components (as subspace positions) of the union of the given
/// pattern matrices, with an edge where any |entry| exceeds the threshold.
fn pattern_components(patterns: &[&ComplexMatrix], dim: usize, threshold: f64) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(dim);
    for m in patterns {
        for a in 0..dim {
            for b in (a + 1)..dim {
                if m.get(a, b).norm() > threshold || m.get(b, a).norm() > threshold {
                    uf.union(a, b);
                }
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for p in 0..dim {
        let root = uf.find(p);
        blocks.entry(root).or_default().push(p);
    }
    let mut components: Vec<Vec<usize>> = blocks.into_values().collect();
    components.sort_by_key(|c| c[0]);
    components
}

fn positions_to_indices(components: Vec<Vec<usize>>, s: &FeasibleSubspace) -> Vec<Vec<usize>> {
    components
        .into_iter()
        .map(|block| block.into_iter().map(|p| s.basis_indices()[p]).collect())
        .collect()
}

/// Largest coupling magnitude between the subspace and its complement.
fn leakage(b: &ComplexMatrix, s: &FeasibleSubspace) -> f64 {
    let dim = b.rows();
    let mut in_s = vec![false; dim];
    for &i in s.basis_indices() {
        in_s[i] = true;
    }
    let mut worst = 0.0f64;
    for i in 0..dim {
        if in_s[i] {
            continue;
        }
        for &j in s.basis_indices() {
            worst = worst.max(b.get(i, j).norm());
        }
    }
    worst
}

/// Checks the three mixer conditions for a full-space Hermitian operator.
pub fn check_mixer(
    b: &ComplexMatrix,
    s: &FeasibleSubspace,
    tols: &Tolerances,
) -> Result<MixerVerdict> {
    let restricted = restrict(b, s)?;
    let max_leakage = leakage(b, s);
    let feasibility_preserving = max_leakage < tols.zero_entry;

    let d = restricted.dim();
    let mut most_negative_entry = f64::INFINITY;
    let mut max_imag_entry = 0.0f64;
    for a in 0..d {
        for c in 0..d {
            let entry = restricted.matrix.get(a, c);
            most_negative_entry = most_negative_entry.min(entry.re);
            max_imag_entry = max_imag_entry.max(entry.im.abs());
        }
    }
    let entrywise_nonneg =
        most_negative_entry > -tols.zero_entry && max_imag_entry < tols.zero_entry;

    let components = positions_to_indices(
        pattern_components(&[&restricted.matrix], d, tols.zero_entry),
        s,
    );
    let irreducible = components.len() == 1;

    Ok(MixerVerdict {
        feasibility_preserving,
        max_leakage,
        entrywise_nonneg,
        most_negative_entry,
        max_imag_entry,
        irreducible,
        components,
    })
}

/// Checks a candidate mixing family: each member must preserve feasibility
/// and be entrywise non-negative on the subspace, and the union of the
/// members' restricted patterns must be connected. When the per-member
/// hypotheses hold, the joint verdict is cross-checked against
/// `check_mixer(Σ B_i)` — the two routes must agree.
pub fn check_mixing_family(
    fam: &MixingFamily,
    s: &FeasibleSubspace,
    tols: &Tolerances,
) -> Result<FamilyVerdict> {
    let mut member_feasibility_preserving = Vec::with_capacity(fam.members().len());
    let mut member_entrywise_nonneg = Vec::with_capacity(fam.members().len());
    let mut restricted = Vec::with_capacity(fam.members().len());
    for member in fam.members() {
        let verdict = check_mixer(member, s, tols)?;
        member_feasibility_preserving.push(verdict.feasibility_preserving);
        member_entrywise_nonneg.push(verdict.entrywise_nonneg);
        restricted.push(restrict(member, s)?.matrix);
    }

    let refs: Vec<&ComplexMatrix> = restricted.iter().collect();
    let union_components =
        positions_to_indices(pattern_components(&refs, s.dim_s(), tols.zero_entry), s);
    let jointly_irreducible = union_components.len() == 1;

    // Joint irreducibility must agree with irreducibility of the summed
    // operator whenever the non-negativity hypothesis holds (entries then
    // cannot cancel during summation).
    let hypotheses_hold = member_feasibility_preserving.iter().all(|&b| b)
        && member_entrywise_nonneg.iter().all(|&b| b);
    if hypotheses_hold {
        let sum_verdict = check_mixer(&fam.sum(), s, tols)?;
        if sum_verdict.irreducible != jointly_irreducible {
            return Err(Error::Consistency(format!(
                "union-graph irreducibility ({jointly_irreducible}) disagrees with \
                 summed-operator irreducibility ({})",
                sum_verdict.irreducible
            )));
        }
    }

    Ok(FamilyVerdict {
        member_feasibility_preserving,
        member_entrywise_nonneg,
        jointly_irreducible,
        union_components,
    })
}

/// The unique top eigenstate of a validated mixer restriction, phase-fixed
/// to non-negative real entries, with the spectral gap it sits above.
#[derive(Debug, Clone)]
pub struct PerronState {
    pub vector: ComplexVector,
    pub lambda_max: f64,
    pub gap: f64,
}

/// Top eigenvector of `r`, which must carry an all-true mixer verdict.
/// A numerically degenerate top eigenvalue signals an inconsistency
/// between the verdict and the tolerances and is reported as an error.
pub fn perron_top_eigenstate(
    r: &RestrictedOperator,
    verdict: &MixerVerdict,
    tols: &Tolerances,
) -> Result<PerronState> {
    if !verdict.all_true() {
        return Err(Error::Validation(
            "perron_top_eigenstate requires an all-true mixer verdict".into(),
        ));
    }
    let dec = eig_hermitian(&r.matrix)?;
    let d = dec.dim();
    let lambda_max = dec.eigenvalues[d - 1];
    let gap = dec.top_gap();
    let scale = dec
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    if d > 1 && gap < tols.degenerate_gap * scale {
        return Err(Error::DegenerateTop {
            gap,
            threshold: tols.degenerate_gap * scale,
        });
    }
    let mut vector = dec.eigenvectors.column(d - 1);
    // Rotate the global phase so the largest entry is positive real; the
    // Perron vector then has non-negative real parts throughout.
    let (mut best, mut best_norm) = (C64::new(1.0, 0.0), 0.0);
    for i in 0..vector.dim() {
        let nrm = vector.get(i).norm();
        if nrm > best_norm {
            best_norm = nrm;
            best = vector.get(i);
        }
    }
    if best_norm > 0.0 {
        vector = vector.scale(best.conj() / best_norm);
    }
    Ok(PerronState {
        vector: vector.normalized(),
        lambda_max,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_maxcut, solve_brute_force};

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn one(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn objective_hamiltonian_four_cycle() {
        let p = make_maxcut(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = objective_hamiltonian(&p);
        assert_eq!(c.get(5, 5), one(4.0));
        assert_eq!(c.get(10, 10), one(4.0));
        assert_eq!(c.get(0, 0), one(0.0));
        assert_eq!(c.max_off_diagonal(), 0.0);
    }

    #[test]
    fn objective_hamiltonian_small_cases() {
        let zero = Cop::from_fn(2, |_| 0.0, |_| true).unwrap();
        assert_eq!(objective_hamiltonian(&zero).max_abs(), 0.0);

        let single = Cop::from_fn(1, |z| if z.index() == 0 { 1.0 } else { 0.0 }, |_| true).unwrap();
        let c = objective_hamiltonian(&single);
        assert_eq!(c.get(0, 0), one(1.0));
        assert_eq!(c.get(1, 1), one(0.0));
    }

    #[test]
    fn restrict_identity_and_transverse_field() {
        let s = FeasibleSubspace::from_indices(2, vec![0, 3]).unwrap();
        let id = ComplexMatrix::identity(4);
        let r = restrict(&id, &s).unwrap();
        assert!(r.matrix.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-15);

        // Transverse field couples exactly Hamming-distance-1 pairs.
        let b = transverse_field(2);
        let full = FeasibleSubspace::full(2);
        let rb = restrict(&b, &full).unwrap();
        for i in 0..4usize {
            for j in 0..4usize {
                let expected = if (i ^ j).count_ones() == 1 { 1.0 } else { 0.0 };
                assert_eq!(rb.matrix.get(i, j), one(expected), "entry ({i},{j})");
            }
        }

        // {00, 11} are at Hamming distance 2: restriction is zero.
        let rs = restrict(&b, &s).unwrap();
        assert_eq!(rs.matrix.max_abs(), 0.0);
    }

    #[test]
    fn phase_separator_verdicts() {
        let p = make_maxcut(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let report = solve_brute_force(&p).unwrap();
        let s = FeasibleSubspace::from_report(4, &report);
        let c = objective_hamiltonian(&p);

        let ok = check_phase_separator(&c, &s, &report.optimal_indices, &tols()).unwrap();
        assert!(ok.is_valid());

        // Negated objective flips argmax to argmin.
        let neg = c.scale(one(-1.0));
        let bad = check_phase_separator(&neg, &s, &report.optimal_indices, &tols()).unwrap();
        assert!(bad.diagonal && !bad.argmax_matches_optimal);

        // σx is not diagonal.
        let sx = transverse_field(1);
        let s1 = FeasibleSubspace::full(1);
        let off = check_phase_separator(&sx, &s1, &[0, 1], &tols()).unwrap();
        assert!(!off.diagonal && !off.is_valid());
    }

    #[test]
    fn transverse_field_is_a_mixer() {
        for n in 1..=3 {
            let verdict = check_mixer(&transverse_field(n), &FeasibleSubspace::full(n), &tols())
                .unwrap();
            assert!(verdict.all_true(), "hypercube n={n}");
            assert_eq!(verdict.components.len(), 1);
        }
    }

    /// The two-member family whose members alone are reducible but whose
    /// union is connected: members on span{z1..z4} with z1–z2, z3–z4 edges
    /// and z1–z3, z3–z4 edges respectively.
    fn split_pair_family() -> (MixingFamily, FeasibleSubspace) {
        let s = FeasibleSubspace::full(2);
        let mut b1 = ComplexMatrix::zeros(4, 4);
        b1.set(0, 1, one(1.0));
        b1.set(1, 0, one(1.0));
        b1.set(2, 3, one(1.0));
        b1.set(3, 2, one(1.0));
        let mut b2 = ComplexMatrix::zeros(4, 4);
        b2.set(0, 2, one(1.0));
        b2.set(2, 0, one(1.0));
        b2.set(2, 3, one(1.0));
        b2.set(3, 2, one(1.0));
        (MixingFamily::new(vec![b1, b2]).unwrap(), s)
    }

    #[test]
    fn split_pair_member_partitions() {
        let (fam, s) = split_pair_family();
        let v1 = check_mixer(&fam.members()[0], &s, &tols()).unwrap();
        assert!(!v1.irreducible);
        assert_eq!(v1.components, vec![vec![0, 1], vec![2, 3]]);

        let v2 = check_mixer(&fam.members()[1], &s, &tols()).unwrap();
        assert!(!v2.irreducible);
        assert_eq!(v2.components, vec![vec![0, 2, 3], vec![1]]);
    }

    #[test]
    fn split_pair_family_is_mixing_but_single_member_is_not() {
        let (fam, s) = split_pair_family();
        let verdict = check_mixing_family(&fam, &s, &tols()).unwrap();
        assert!(verdict.is_mixing_family());
        assert_eq!(verdict.union_components.len(), 1);

        let single = MixingFamily::new(vec![fam.members()[0].clone()]).unwrap();
        let v = check_mixing_family(&single, &s, &tols()).unwrap();
        assert!(!v.is_mixing_family());
        assert_eq!(v.union_components, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn negative_entry_fails_nonnegativity() {
        let s = FeasibleSubspace::full(1);
        let mut b = ComplexMatrix::zeros(2, 2);
        b.set(0, 1, one(-0.5));
        b.set(1, 0, one(-0.5));
        let verdict = check_mixer(&b, &s, &tols()).unwrap();
        assert!(!verdict.entrywise_nonneg);
        assert_eq!(verdict.most_negative_entry, -0.5);
        assert!(verdict.irreducible); // pattern is still connected
    }

    #[test]
    fn sigma_x_members_sum_to_transverse_field() {
        let n = 3;
        let fam = MixingFamily::new((0..n).map(|k| sigma_x_on(n, k)).collect()).unwrap();
        let s = FeasibleSubspace::full(n);
        let verdict = check_mixing_family(&fam, &s, &tols()).unwrap();
        assert!(verdict.is_mixing_family());
        assert!(fam.sum().sub(&transverse_field(n)).max_abs() < 1e-15);
    }

    #[test]
    fn perron_uniform_for_transverse_field() {
        for n in 1..=3usize {
            let s = FeasibleSubspace::full(n);
            let b = transverse_field(n);
            let verdict = check_mixer(&b, &s, &tols()).unwrap();
            let r = restrict(&b, &s).unwrap();
            let perron = perron_top_eigenstate(&r, &verdict, &tols()).unwrap();
            assert!((perron.lambda_max - n as f64).abs() < 1e-10);
            let dim = 1usize << n;
            let expected = 1.0 / (dim as f64).sqrt();
            for i in 0..dim {
                assert!((perron.vector.get(i) - one(expected)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn perron_two_level_and_path() {
        let s = FeasibleSubspace::full(1);
        let b = transverse_field(1);
        let verdict = check_mixer(&b, &s, &tols()).unwrap();
        let r = restrict(&b, &s).unwrap();
        let perron = perron_top_eigenstate(&r, &verdict, &tols()).unwrap();
        assert!((perron.lambda_max - 1.0).abs() < 1e-12);
        assert!((perron.gap - 2.0).abs() < 1e-12);

        // Path graph on three feasible states: λ_max = √2, entries > 0.
        let s3 = FeasibleSubspace::from_indices(2, vec![0, 1, 2]).unwrap();
        let mut b3 = ComplexMatrix::zeros(4, 4);
        for (a, c) in [(0usize, 1usize), (1, 2)] {
            b3.set(a, c, one(1.0));
            b3.set(c, a, one(1.0));
        }
        let verdict3 = check_mixer(&b3, &s3, &tols()).unwrap();
        assert!(verdict3.all_true());
        let r3 = restrict(&b3, &s3).unwrap();
        let perron3 = perron_top_eigenstate(&r3, &verdict3, &tols()).unwrap();
        assert!((perron3.lambda_max - std::f64::consts::SQRT_2).abs() < 1e-10);
        for i in 0..3 {
            assert!(perron3.vector.get(i).re > 1e-12);
            assert!(perron3.vector.get(i).im.abs() < 1e-12);
        }
    }

    #[test]
    fn perron_rejects_degenerate_top() {
        // Two disconnected edges: top eigenvalue 1 is doubly degenerate.
        let s = FeasibleSubspace::full(2);
        let mut b = ComplexMatrix::zeros(4, 4);
        b.set(0, 1, one(1.0));
        b.set(1, 0, one(1.0));
        b.set(2, 3, one(1.0));
        b.set(3, 2, one(1.0));
        let r = restrict(&b, &s).unwrap();
        // Forge an all-true verdict to reach the degeneracy check.
        let verdict = MixerVerdict {
            feasibility_preserving: true,
            max_leakage: 0.0,
            entrywise_nonneg: true,
            most_negative_entry: 0.0,
            max_imag_entry: 0.0,
            irreducible: true,
            components: vec![vec![0, 1, 2, 3]],
        };
        assert!(matches!(
            perron_top_eigenstate(&r, &verdict, &tols()),
            Err(Error::DegenerateTop { .. })
        ));
    }

    #[test]
    fn xy_family_group_of_two() {
        let fam = builtin_xy_mixing_family(2, &[vec![0, 1]]).unwrap();
        assert_eq!(fam.members().len(), 1);
        let s = FeasibleSubspace::from_indices(2, vec![0b01, 0b10]).unwrap();
        let r = restrict(&fam.members()[0], &s).unwrap();
        assert_eq!(r.matrix.get(0, 1), one(1.0));
        assert_eq!(r.matrix.get(1, 0), one(1.0));
        assert_eq!(r.matrix.get(0, 0), one(0.0));
        let verdict = check_mixing_family(&fam, &s, &tols()).unwrap();
        assert!(verdict.is_mixing_family());
    }

    #[test]
    fn xy_family_ring_of_three() {
        let fam = builtin_xy_mixing_family(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(fam.members().len(), 3);
        let s = FeasibleSubspace::from_indices(3, vec![0b001, 0b010, 0b100]).unwrap();
        let verdict = check_mixing_family(&fam, &s, &tols()).unwrap();
        assert!(verdict.is_mixing_family());
        // Every member preserves the one-hot subspace exactly.
        for (k, preserved) in verdict.member_feasibility_preserving.iter().enumerate() {
            assert!(preserved, "member {k} leaks");
        }
    }

    #[test]
    fn xy_family_two_groups() {
        let fam = builtin_xy_mixing_family(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(fam.members().len(), 2);
        // One-hot × one-hot: {0101, 0110, 1001, 1010}.
        let s = FeasibleSubspace::from_indices(4, vec![0b0101, 0b0110, 0b1001, 0b1010]).unwrap();
        let verdict = check_mixing_family(&fam, &s, &tols()).unwrap();
        assert!(verdict.is_mixing_family());
        assert_eq!(verdict.union_components.len(), 1);
    }

    #[test]
    fn xy_family_rejects_small_groups() {
        assert!(builtin_xy_mixing_family(3, &[vec![0]]).is_err());
        assert!(builtin_xy_mixing_family(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn transverse_field_leaks_out_of_constrained_subspaces() {
        // σx flips single bits, so a proper subspace closed under no flips
        // sees leakage; the verdict must say so rather than error.
        let s = FeasibleSubspace::from_indices(2, vec![0b01, 0b10]).unwrap();
        let verdict = check_mixer(&transverse_field(2), &s, &tols()).unwrap();
        assert!(!verdict.feasibility_preserving);
        assert!(verdict.max_leakage >= 1.0);
    }

    #[test]
    fn empty_family_rejected() {
        assert!(MixingFamily::new(vec![]).is_err());
    }
}
