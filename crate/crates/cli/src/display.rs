//! Display orderings and tabular output of joint probability matrices.

use fockwitness::patterns::{classes, k_value};
use fockwitness::{FockBasis, PhotonPattern};
use serde::Serialize;

/// A labelled run of consecutive rows or columns.
#[derive(Debug, Clone, Serialize)]
pub struct Group {
    pub label: String,
    pub size: usize,
}

/// Permutation of a basis for display, with its grouping.
#[derive(Debug, Clone, Serialize)]
pub struct Ordering {
    pub scheme: &'static str,
    /// Canonical basis index of each displayed position.
    pub order: Vec<usize>,
    pub groups: Vec<Group>,
}

/// Pattern classes in canonical order, each listed by shift count.
pub fn class_ordering(basis: &FockBasis) -> Ordering {
    let mut order = Vec::with_capacity(basis.len());
    let mut groups = Vec::new();
    for class in classes(basis) {
        for e in class.elements() {
            order.push(basis.index_of(e).expect("class element in basis"));
        }
        groups.push(Group {
            label: format!("E_{}", class.representative()),
            size: class.cardinality(),
        });
    }
    Ordering {
        scheme: "pattern-class",
        order,
        groups,
    }
}

/// Blocks of equal K-value, `K = 0, 1, ..., M-1`, canonical order inside.
pub fn k_ordering(basis: &FockBasis) -> Ordering {
    let mut order = Vec::with_capacity(basis.len());
    let mut groups = Vec::new();
    for k in 0..basis.modes() {
        let block: Vec<usize> = (0..basis.len())
            .filter(|&i| k_value(basis.pattern(i)) == k)
            .collect();
        if block.is_empty() {
            continue;
        }
        groups.push(Group {
            label: format!("K={k}"),
            size: block.len(),
        });
        order.extend(block);
    }
    Ordering {
        scheme: "k-block",
        order,
        groups,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbabilityTable {
    pub basis: &'static str,
    pub modes: usize,
    pub photons_a: usize,
    pub photons_b: usize,
    pub rows: Vec<PhotonPattern>,
    pub cols: Vec<PhotonPattern>,
    pub row_ordering: Ordering,
    pub col_ordering: Ordering,
    pub canonical_rows: Vec<PhotonPattern>,
    pub canonical_cols: Vec<PhotonPattern>,
    /// Display order, `probabilities[r][c]`.
    pub probabilities: Vec<Vec<f64>>,
    /// Same values in canonical basis order.
    pub canonical_probabilities: Vec<Vec<f64>>,
    pub row_marginals: Vec<f64>,
    pub col_marginals: Vec<f64>,
    pub total: f64,
}

impl ProbabilityTable {
    /// `joint` is the row-major distribution over `basis_a x basis_b`.
    pub fn new(
        basis_name: &'static str,
        basis_a: &FockBasis,
        basis_b: &FockBasis,
        joint: &[f64],
        row_ordering: Ordering,
        col_ordering: Ordering,
    ) -> Self {
        let db = basis_b.len();
        let canonical: Vec<Vec<f64>> = joint.chunks(db).map(<[f64]>::to_vec).collect();
        let probabilities: Vec<Vec<f64>> = row_ordering
            .order
            .iter()
            .map(|&r| col_ordering.order.iter().map(|&c| canonical[r][c]).collect())
            .collect();
        let row_marginals: Vec<f64> = probabilities.iter().map(|r| r.iter().sum()).collect();
        let col_marginals: Vec<f64> = (0..db)
            .map(|c| probabilities.iter().map(|r| r[c]).sum())
            .collect();
        ProbabilityTable {
            basis: basis_name,
            modes: basis_a.modes(),
            photons_a: basis_a.photons(),
            photons_b: basis_b.photons(),
            rows: row_ordering
                .order
                .iter()
                .map(|&i| basis_a.pattern(i).clone())
                .collect(),
            cols: col_ordering
                .order
                .iter()
                .map(|&i| basis_b.pattern(i).clone())
                .collect(),
            canonical_rows: basis_a.patterns().to_vec(),
            canonical_cols: basis_b.patterns().to_vec(),
            total: row_marginals.iter().sum(),
            row_marginals,
            col_marginals,
            probabilities,
            canonical_probabilities: canonical,
            row_ordering,
            col_ordering,
        }
    }

    /// Header row of column patterns, then one row per `A` pattern. The
    /// corner cell names the basis and the orderings.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![format!(
            "basis={};rows={};cols={}",
            self.basis, self.row_ordering.scheme, self.col_ordering.scheme
        )];
        header.extend(self.cols.iter().map(|p| p.to_string()));
        w.write_record(&header)?;
        for (pattern, row) in self.rows.iter().zip(&self.probabilities) {
            let mut record = vec![pattern.to_string()];
            record.extend(row.iter().map(|&x| significant(x, 12)));
            w.write_record(&record)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Decimal with `digits` significant digits, switching to exponent form
/// below `1e-6` so round-off residues stay short.
pub fn significant(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude < -6 {
        let decimals = (digits - 1) as usize;
        return format!("{x:.decimals$e}");
    }
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
