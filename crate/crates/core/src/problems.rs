//! Constrained combinatorial optimization problems over bit strings,
//! brute-force solution oracles, and built-in generators.
//!
//! Bit order is big-endian throughout the crate: the leftmost bit is
//! qubit 1 and the most significant bit of the basis index, so
//! `index = Σ_{k=1..N} bits_k · 2^{N−k}`.

use crate::doc::{FeasibleDoc, ObjectiveDoc, ProblemDocument};
use crate::error::{Error, Result};
use crate::tol;

/// Largest supported qubit count; keeps dense O(dim³) work at desk scale.
pub const MAX_QUBITS: usize = 12;

/// A length-N bit string paired with its big-endian basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<u8>,
    index: usize,
}

impl BitString {
    pub fn from_index(n: usize, index: usize) -> Self {
        assert!(index < (1usize << n), "index {index} out of range for {n} bits");
        let bits = (0..n).map(|k| ((index >> (n - 1 - k)) & 1) as u8).collect();
        Self { bits, index }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Contract("bit values must be 0 or 1".into()));
        }
        let n = bits.len();
        let index = bits
            .iter()
            .enumerate()
            .map(|(k, &b)| (b as usize) << (n - 1 - k))
            .sum();
        Ok(Self {
            bits: bits.to_vec(),
            index,
        })
    }

    /// Parses "0101"-style strings (leftmost character = qubit 1).
    pub fn parse(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Contract(format!(
                    "invalid character '{other}' in bit string \"{s}\""
                ))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn bit(&self, qubit: usize) -> u8 {
        self.bits[qubit]
    }

    pub fn hamming_weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Bit value of `qubit` (0-based) inside basis `index`, big-endian.
pub fn bit_of(index: usize, qubit: usize, n: usize) -> u8 {
    ((index >> (n - 1 - qubit)) & 1) as u8
}

/// A combinatorial optimization problem: a total objective over all
/// 2^N bit strings plus a feasibility predicate, both stored as tables.
#[derive(Debug, Clone)]
pub struct Cop {
    n: usize,
    objective: Vec<f64>,
    feasible: Vec<bool>,
}

impl Cop {
    /// Builds a problem from explicit tables indexed by basis index.
    pub fn from_tables(n: usize, objective: Vec<f64>, feasible: Vec<bool>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Contract(format!(
                "qubit count {n} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        let dim = 1usize << n;
        if objective.len() != dim {
            return Err(Error::Contract(format!(
                "objective table has {} entries, expected {dim}",
                objective.len()
            )));
        }
        if feasible.len() != dim {
            return Err(Error::Contract(format!(
                "feasibility table has {} entries, expected {dim}",
                feasible.len()
            )));
        }
        if objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("objective values must be finite".into()));
        }
        if !feasible.iter().any(|&f| f) {
            return Err(Error::InfeasibleProblem);
        }
        Ok(Self {
            n,
            objective,
            feasible,
        })
    }

    /// Builds a problem by evaluating closures on every bit string.
    pub fn from_fn(
        n: usize,
        objective: impl Fn(&BitString) -> f64,
        feasible: impl Fn(&BitString) -> bool,
    ) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Contract(format!(
                "qubit count {n} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        let dim = 1usize << n;
        let mut obj = Vec::with_capacity(dim);
        let mut feas = Vec::with_capacity(dim);
        for index in 0..dim {
            let z = BitString::from_index(n, index);
            obj.push(objective(&z));
            feas.push(feasible(&z));
        }
        Self::from_tables(n, obj, feas)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn objective(&self, index: usize) -> f64 {
        self.objective[index]
    }

    pub fn objective_table(&self) -> &[f64] {
        &self.objective
    }

    pub fn is_feasible(&self, index: usize) -> bool {
        self.feasible[index]
    }
}

/// Output of the brute-force solver: the feasible set, the optimal set,
/// and the attained maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub feasible_indices: Vec<usize>,
    pub optimal_indices: Vec<usize>,
    pub f_max: f64,
}

/// Exact enumeration of all 2^N strings. Ties at the maximum are resolved
/// with absolute tolerance `TIE_ABS_TOL` since table-loaded objectives may
/// carry rounding.
pub fn solve_brute_force(p: &Cop) -> Result<SolutionReport> {
    let feasible_indices: Vec<usize> = (0..p.dim()).filter(|&i| p.is_feasible(i)).collect();
    if feasible_indices.is_empty() {
        return Err(Error::InfeasibleProblem);
    }
    let f_max = feasible_indices
        .iter()
        .map(|&i| p.objective(i))
        .fold(f64::NEG_INFINITY, f64::max);
    let optimal_indices: Vec<usize> = feasible_indices
        .iter()
        .copied()
        .filter(|&i| p.objective(i) >= f_max - tol::TIE_ABS_TOL)
        .collect();
    Ok(SolutionReport {
        feasible_indices,
        optimal_indices,
        f_max,
    })
}

fn check_edges(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::Contract(format!(
                "edge ({u},{v}) has a vertex outside [0,{n})"
            )));
        }
        if u == v {
            return Err(Error::Contract(format!("self-loop at vertex {u}")));
        }
    }
    Ok(())
}

/// MaxCut: f(z) counts edges whose endpoints carry differing bits; every
/// string is feasible.
pub fn make_maxcut(n: usize, edges: &[(usize, usize)]) -> Result<Cop> {
    check_edges(n, edges)?;
    let edges = edges.to_vec();
    Cop::from_fn(
        n,
        move |z| {
            edges
                .iter()
                .filter(|&&(u, v)| z.bit(u) != z.bit(v))
                .count() as f64
        },
        |_| true,
    )
}

/// Maximum independent set: f(z) is the Hamming weight; z is feasible iff
/// no edge has both endpoints set.
pub fn make_max_independent_set(n: usize, edges: &[(usize, usize)]) -> Result<Cop> {
    check_edges(n, edges)?;
    let edges = edges.to_vec();
    Cop::from_fn(
        n,
        |z| z.hamming_weight() as f64,
        move |z| edges.iter().all(|&(u, v)| z.bit(u) == 0 || z.bit(v) == 0),
    )
}

/// Builds a problem from a parsed problem-definition document.
pub fn load_problem(doc: &ProblemDocument) -> Result<Cop> {
    let n = doc.n;
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Document(format!(
            "qubit count {n} outside supported range 1..={MAX_QUBITS}"
        )));
    }
    let dim = 1usize << n;

    let objective: Vec<f64> = match &doc.objective {
        ObjectiveDoc::Maxcut { edges } => {
            check_edges(n, edges).map_err(|e| Error::Document(e.to_string()))?;
            (0..dim)
                .map(|i| {
                    edges
                        .iter()
                        .filter(|&&(u, v)| bit_of(i, u, n) != bit_of(i, v, n))
                        .count() as f64
                })
                .collect()
        }
        ObjectiveDoc::MisWeight => (0..dim).map(|i| i.count_ones() as f64).collect(),
        ObjectiveDoc::Table { values } => {
            if values.len() != dim {
                return Err(Error::Document(format!(
                    "objective table has {} entries, expected {dim}",
                    values.len()
                )));
            }
            values.clone()
        }
    };

    let feasible: Vec<bool> = match &doc.feasible {
        FeasibleDoc::All => vec![true; dim],
        FeasibleDoc::List { strings } => {
            let mut mask = vec![false; dim];
            for s in strings {
                let z = BitString::parse(s).map_err(|e| Error::Document(e.to_string()))?;
                if z.len() != n {
                    return Err(Error::Document(format!(
                        "feasible string \"{s}\" has length {}, expected {n}",
                        z.len()
                    )));
                }
                mask[z.index()] = true;
            }
            mask
        }
        FeasibleDoc::IndependentSet { edges } => {
            check_edges(n, edges).map_err(|e| Error::Document(e.to_string()))?;
            (0..dim)
                .map(|i| {
                    edges
                        .iter()
                        .all(|&(u, v)| bit_of(i, u, n) == 0 || bit_of(i, v, n) == 0)
                })
                .collect()
        }
        FeasibleDoc::OneHot { groups } => {
            validate_one_hot_groups(n, groups).map_err(|e| Error::Document(e.to_string()))?;
            (0..dim)
                .map(|i| {
                    groups.iter().all(|group| {
                        group.iter().filter(|&&q| bit_of(i, q, n) == 1).count() == 1
                    })
                })
                .collect()
        }
    };

    Cop::from_tables(n, objective, feasible).map_err(|e| match e {
        Error::InfeasibleProblem => Error::InfeasibleProblem,
        other => Error::Document(other.to_string()),
    })
}

/// Groups must be disjoint, in range, and each of size ≥ 2.
pub fn validate_one_hot_groups(n: usize, groups: &[Vec<usize>]) -> Result<()> {
    if groups.is_empty() {
        return Err(Error::Contract("one-hot constraint needs at least one group".into()));
    }
    let mut seen = vec![false; n];
    for group in groups {
        if group.len() < 2 {
            return Err(Error::Contract(format!(
                "one-hot group {group:?} has fewer than 2 qubits"
            )));
        }
        for &q in group {
            if q >= n {
                return Err(Error::Contract(format!(
                    "one-hot group qubit {q} outside [0,{n})"
                )));
            }
            if seen[q] {
                return Err(Error::Contract(format!(
                    "qubit {q} appears in more than one one-hot group"
                )));
            }
            seen[q] = true;
        }
    }
    Ok(())
}
