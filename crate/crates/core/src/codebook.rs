//! Sparse codebooks: factor graphs, signature patterns, operator
//! parameters, assembly from a mother constellation, and the JSON
//! interchange format.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::mother::MotherConstellation;

/// Supported overloading factors `J/K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Overload {
    /// 6 users on 4 resources.
    P150,
    /// 10 users on 5 resources.
    P200,
}

impl Overload {
    pub fn percent(self) -> u32 {
        match self {
            Overload::P150 => 150,
            Overload::P200 => 200,
        }
    }
}

impl From<Overload> for u32 {
    fn from(o: Overload) -> u32 {
        o.percent()
    }
}

impl TryFrom<u32> for Overload {
    type Error = String;

    fn try_from(v: u32) -> std::result::Result<Self, String> {
        match v {
            150 => Ok(Overload::P150),
            200 => Ok(Overload::P200),
            _ => Err(format!("unsupported overload {v}, expected 150 or 200")),
        }
    }
}

impl std::str::FromStr for Overload {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: u32 = s
            .trim_end_matches('%')
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse overload '{s}'")))?;
        Overload::try_from(v).map_err(Error::Domain)
    }
}

/// Regular bipartite graph between `K` resources and `J` users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorGraph {
    pub f: Vec<Vec<u8>>,
    pub k: usize,
    pub j: usize,
    /// Users per resource.
    pub d_f: usize,
    /// Resources per user.
    pub n: usize,
    pub users_of_resource: Vec<Vec<usize>>,
    pub resources_of_user: Vec<Vec<usize>>,
}

impl FactorGraph {
    pub fn from_matrix(f: Vec<Vec<u8>>) -> Result<Self> {
        let k = f.len();
        if k == 0 || f[0].is_empty() {
            return Err(Error::Validation("factor matrix is empty".into()));
        }
        let j = f[0].len();
        if f.iter().any(|row| row.len() != j) {
            return Err(Error::Validation("factor matrix rows have different lengths".into()));
        }
        if f.iter().flatten().any(|&v| v > 1) {
            return Err(Error::Validation("factor matrix entries must be 0 or 1".into()));
        }
        let users_of_resource: Vec<Vec<usize>> = f
            .iter()
            .map(|row| (0..j).filter(|&c| row[c] == 1).collect())
            .collect();
        let resources_of_user: Vec<Vec<usize>> = (0..j)
            .map(|c| (0..k).filter(|&r| f[r][c] == 1).collect())
            .collect();
        let d_f = users_of_resource[0].len();
        let n = resources_of_user[0].len();
        if users_of_resource.iter().any(|u| u.len() != d_f) || d_f == 0 {
            return Err(Error::Validation("factor matrix row weights are not all equal".into()));
        }
        if resources_of_user.iter().any(|r| r.len() != n) || n == 0 {
            return Err(Error::Validation("factor matrix column weights are not all equal".into()));
        }
        Ok(FactorGraph { f, k, j, d_f, n, users_of_resource, resources_of_user })
    }

    pub fn overload(&self) -> Option<Overload> {
        if *self == builtin_factor_graph(Overload::P150) {
            Some(Overload::P150)
        } else if *self == builtin_factor_graph(Overload::P200) {
            Some(Overload::P200)
        } else {
            None
        }
    }
}

const F_4X6: [[u8; 6]; 4] = [
    [0, 1, 1, 0, 1, 0],
    [1, 0, 1, 0, 0, 1],
    [0, 1, 0, 1, 0, 1],
    [1, 0, 0, 1, 1, 0],
];

const F_5X10: [[u8; 10]; 5] = [
    [1, 1, 1, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 1, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 1, 1, 0],
    [0, 0, 1, 0, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 1, 0, 0, 1, 0, 1, 1],
];

// Operator index (1-based) per resource and user; 0 marks no connection.
const Z_4X6: [[u8; 6]; 4] = [
    [0, 1, 2, 0, 3, 0],
    [1, 0, 2, 0, 0, 3],
    [0, 3, 0, 2, 0, 1],
    [3, 0, 0, 2, 1, 0],
];

const Z_5X10: [[u8; 10]; 5] = [
    [1, 2, 3, 4, 0, 0, 0, 0, 0, 0],
    [4, 0, 0, 0, 1, 2, 3, 0, 0, 0],
    [0, 3, 0, 0, 4, 0, 0, 1, 2, 0],
    [0, 0, 2, 0, 0, 3, 0, 4, 0, 1],
    [0, 0, 0, 1, 0, 0, 2, 0, 3, 4],
];

pub fn builtin_factor_graph(overload: Overload) -> FactorGraph {
    let f: Vec<Vec<u8>> = match overload {
        Overload::P150 => F_4X6.iter().map(|r| r.to_vec()).collect(),
        Overload::P200 => F_5X10.iter().map(|r| r.to_vec()).collect(),
    };
    FactorGraph::from_matrix(f).expect("built-in factor matrices are regular")
}

/// Which operator `z_i` sits at each `(resource, user)` position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignaturePattern {
    /// `K x J`, 0-based operator index where the factor matrix has a one.
    pub index: Vec<Vec<Option<usize>>>,
}

impl SignaturePattern {
    pub fn operator_count(&self) -> usize {
        self.index.iter().flatten().flatten().max().map_or(0, |&i| i + 1)
    }

    pub fn matches(&self, fg: &FactorGraph) -> bool {
        self.index.len() == fg.k
            && self.index.iter().enumerate().all(|(k, row)| {
                row.len() == fg.j
                    && row.iter().enumerate().all(|(j, z)| z.is_some() == (fg.f[k][j] == 1))
            })
    }

    /// Numeric `K x J` signature matrix for the given operators.
    pub fn matrix(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.index
            .iter()
            .map(|row| {
                row.iter()
                    .map(|i| i.map_or(Complex64::new(0.0, 0.0), |i| z[i]))
                    .collect()
            })
            .collect()
    }
}

pub fn builtin_signature(overload: Overload) -> SignaturePattern {
    let conv = |r: &[u8]| r.iter().map(|&v| v.checked_sub(1).map(usize::from)).collect();
    let index = match overload {
        Overload::P150 => Z_4X6.iter().map(|r| conv(r)).collect(),
        Overload::P200 => Z_5X10.iter().map(|r| conv(r)).collect(),
    };
    SignaturePattern { index }
}

/// Free parameters of the operators `z_i = E_i exp(i theta_i)` and of the
/// GAM basic constellation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorParams {
    pub energies: Vec<f64>,
    pub angles: Vec<f64>,
    pub rho: f64,
    pub phi: f64,
}

impl OperatorParams {
    pub fn operators(&self) -> Vec<Complex64> {
        self.energies
            .iter()
            .zip(&self.angles)
            .map(|(&e, &t)| Complex64::from_polar(e, t))
            .collect()
    }

    /// Check the design constraints: energies positive summing to `MJ/K`,
    /// angles in `[0, pi]`, `rho` in `(-1, T]`, `phi` in `[0, pi/2]`.
    pub fn check_constraints(&self, m: usize, j: usize, k: usize, t: usize) -> Result<()> {
        let tol = 1e-9;
        if self.energies.len() != self.angles.len() {
            return domain("energies and angles differ in length");
        }
        if self.energies.iter().any(|&e| !(e > 0.0)) {
            return domain("energies must be positive");
        }
        let target = (m * j) as f64 / k as f64;
        let sum: f64 = self.energies.iter().sum();
        if (sum - target).abs() > tol * target.max(1.0) {
            return domain(format!("energies sum to {sum}, expected MJ/K = {target}"));
        }
        if self.angles.iter().any(|&a| !(-tol..=PI + tol).contains(&a)) {
            return domain("angles must lie in [0, pi]");
        }
        if !(self.rho > -1.0 && self.rho <= t as f64 + tol) {
            return domain(format!("rho must lie in (-1, {t}], got {}", self.rho));
        }
        if !(-tol..=PI / 2.0 + tol).contains(&self.phi) {
            return domain(format!("phi must lie in [0, pi/2], got {}", self.phi));
        }
        Ok(())
    }
}

/// Whether the power-diversity guidance holds for a set of operators:
/// pairwise distinct magnitudes, and the overload-specific user imbalance
/// (`|z1|+|z3| != 2|z2|` for 150%, `|z1|+|z4| != |z2|+|z3|` for 200%).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerImbalance {
    pub distinct_magnitudes: bool,
    pub user_imbalance: Option<bool>,
}

pub fn power_imbalance(z: &[Complex64], overload: Option<Overload>) -> PowerImbalance {
    let tol = 1e-9;
    let a: Vec<f64> = z.iter().map(|v| v.norm()).collect();
    let distinct_magnitudes = (0..a.len())
        .all(|i| (i + 1..a.len()).all(|l| (a[i] - a[l]).abs() > tol));
    let user_imbalance = match (overload, a.len()) {
        (Some(Overload::P150), 3) => Some((a[0] + a[2] - 2.0 * a[1]).abs() > tol),
        (Some(Overload::P200), 4) => Some((a[0] + a[3] - a[1] - a[2]).abs() > tol),
        _ => None,
    };
    PowerImbalance { distinct_magnitudes, user_imbalance }
}

/// Optional Rician K-factor that serializes infinity as the string `"inf"`.
pub mod kappa_serde {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(k) if k.is_infinite() => s.serialize_str("inf"),
            Some(k) => s.serialize_f64(*k),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Num(k)) => Ok(Some(k)),
            Some(Repr::Text(t)) if t == "inf" => Ok(Some(f64::INFINITY)),
            Some(Repr::Text(t)) => Err(serde::de::Error::custom(format!("invalid kappa '{t}'"))),
        }
    }

    /// The same representation for a plain `f64`.
    pub mod plain {
        use super::*;

        pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
            super::serialize(&Some(*v), s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
            super::deserialize(d)?.ok_or_else(|| serde::de::Error::custom("kappa must not be null"))
        }
    }
}

/// Design parameters recorded alongside a codebook.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DesignMeta {
    #[serde(rename = "T")]
    pub t: Option<usize>,
    #[serde(with = "kappa_serde")]
    pub kappa: Option<f64>,
    pub ebn0_db: Option<f64>,
    pub rho: Option<f64>,
    pub phi: Option<f64>,
    #[serde(rename = "E")]
    pub energies: Option<Vec<f64>>,
    pub theta: Option<Vec<f64>>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

/// One user's codebook: `M` codewords of length `K` and their bit labels.
#[derive(Debug, Clone, PartialEq)]
pub struct UserCodebook {
    pub id: usize,
    pub codewords: Vec<Vec<Complex64>>,
    pub labels: Vec<String>,
}

/// `J` sparse codebooks sharing one factor graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookSet {
    pub m: usize,
    pub graph: FactorGraph,
    pub overload: Option<Overload>,
    pub users: Vec<UserCodebook>,
    pub design_meta: DesignMeta,
}

/// Natural binary labels `0..M` of width `log2 M`.
pub fn natural_labels(m: usize) -> Vec<String> {
    let width = m.trailing_zeros() as usize;
    (0..m).map(|v| format!("{v:0width$b}")).collect()
}

impl CodebookSet {
    pub fn k(&self) -> usize {
        self.graph.k
    }

    pub fn j(&self) -> usize {
        self.graph.j
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn d_f(&self) -> usize {
        self.graph.d_f
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.m.trailing_zeros() as usize
    }

    /// `M^J`, saturating.
    pub fn superimposed_size(&self) -> u128 {
        (self.m as u128).checked_pow(self.j() as u32).unwrap_or(u128::MAX)
    }

    pub fn entry(&self, j: usize, m: usize, k: usize) -> Complex64 {
        self.users[j].codewords[m][k]
    }

    /// Superimposed codeword for one codeword index per user.
    pub fn superimpose(&self, indices: &[usize]) -> Vec<Complex64> {
        let mut w = vec![Complex64::new(0.0, 0.0); self.k()];
        for (j, &m) in indices.iter().enumerate() {
            for &k in &self.graph.resources_of_user[j] {
                w[k] += self.users[j].codewords[m][k];
            }
        }
        w
    }

    /// Average codeword energy of user `j`.
    pub fn user_energy(&self, j: usize) -> f64 {
        let cw = &self.users[j].codewords;
        cw.iter().map(|c| c.iter().map(|x| x.norm_sqr()).sum::<f64>()).sum::<f64>() / cw.len() as f64
    }

    /// Average codeword energy across all users.
    pub fn mean_codeword_energy(&self) -> f64 {
        (0..self.j()).map(|j| self.user_energy(j)).sum::<f64>() / self.j() as f64
    }

    /// Copy scaled to unit mean codeword energy.
    pub fn normalized(&self) -> CodebookSet {
        let scale = 1.0 / self.mean_codeword_energy().sqrt();
        let mut out = self.clone();
        for u in &mut out.users {
            for c in &mut u.codewords {
                for x in c.iter_mut() {
                    *x *= scale;
                }
            }
        }
        out
    }

    /// Numeric label of each codeword of user `j`.
    pub fn label_values(&self, j: usize) -> Vec<usize> {
        self.users[j]
            .labels
            .iter()
            .map(|l| usize::from_str_radix(l, 2).expect("labels validated"))
            .collect()
    }

    /// Codeword index carrying each label value of user `j`.
    pub fn codeword_of_label(&self, j: usize) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for (cw, lab) in self.label_values(j).into_iter().enumerate() {
            out[lab] = cw;
        }
        out
    }

    /// Distinct values of user `j` on resource `k` and, per codeword, the
    /// index of its value in that list (exact equality).
    pub fn projection(&self, j: usize, k: usize) -> (Vec<Complex64>, Vec<usize>) {
        let mut values: Vec<Complex64> = Vec::new();
        let mut map = Vec::with_capacity(self.m);
        for c in &self.users[j].codewords {
            let v = c[k];
            let idx = values.iter().position(|&u| u == v).unwrap_or_else(|| {
                values.push(v);
                values.len() - 1
            });
            map.push(idx);
        }
        (values, map)
    }

    /// Largest number of distinct values any user takes on any resource.
    pub fn projection_count(&self) -> usize {
        (0..self.j())
            .flat_map(|j| {
                self.graph.resources_of_user[j]
                    .iter()
                    .map(move |&k| (j, k))
            })
            .map(|(j, k)| self.projection(j, k).0.len())
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let (k, j, m) = (self.k(), self.j(), self.m);
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::Validation(format!("M must be a power of two >= 2, got {m}")));
        }
        if self.users.len() != j {
            return Err(Error::Validation(format!(
                "{} user codebooks for a factor graph with J={j}",
                self.users.len()
            )));
        }
        if let Some(o) = self.overload {
            if self.graph != builtin_factor_graph(o) {
                return Err(Error::Validation(format!(
                    "factor matrix does not match the built-in {}% graph",
                    o.percent()
                )));
            }
        }
        let width = self.bits_per_symbol();
        for (uj, user) in self.users.iter().enumerate() {
            if user.codewords.len() != m {
                return Err(Error::Validation(format!(
                    "user {} has {} codewords, expected {m}",
                    user.id,
                    user.codewords.len()
                )));
            }
            for (cm, c) in user.codewords.iter().enumerate() {
                if c.len() != k {
                    return Err(Error::Validation(format!(
                        "user {} codeword {cm} has length {}, expected {k}",
                        user.id,
                        c.len()
                    )));
                }
                for (rk, x) in c.iter().enumerate() {
                    if !x.re.is_finite() || !x.im.is_finite() {
                        return Err(Error::Validation(format!("user {} has a non-finite entry", user.id)));
                    }
                    if self.graph.f[rk][uj] == 0 && *x != Complex64::new(0.0, 0.0) {
                        return Err(Error::Validation(format!(
                            "user {} codeword {cm} is nonzero on resource {} outside its support",
                            user.id,
                            rk + 1
                        )));
                    }
                }
            }
            for a in 0..m {
                for b in a + 1..m {
                    if user.codewords[a] == user.codewords[b] {
                        return Err(Error::Validation(format!(
                            "user {} codewords {a} and {b} coincide",
                            user.id
                        )));
                    }
                }
            }
            if user.labels.len() != m {
                return Err(Error::Validation(format!("user {} has {} labels", user.id, user.labels.len())));
            }
            let mut seen = vec![false; m];
            for l in &user.labels {
                let ok = l.len() == width && l.chars().all(|ch| ch == '0' || ch == '1');
                let v = if ok { usize::from_str_radix(l, 2).ok() } else { None };
                match v {
                    Some(v) if !seen[v] => seen[v] = true,
                    _ => {
                        return Err(Error::Validation(format!(
                            "user {} labels are not a permutation of {width}-bit strings",
                            user.id
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = CodebookFile {
            m: self.m,
            k: self.k(),
            j: self.j(),
            n: self.n(),
            overload: self.overload,
            f: self.graph.f.clone(),
            users: self
                .users
                .iter()
                .map(|u| UserFile {
                    id: u.id,
                    codewords: u
                        .codewords
                        .iter()
                        .map(|c| c.iter().map(|x| [x.re, x.im]).collect())
                        .collect(),
                    labels: u.labels.clone(),
                })
                .collect(),
            design_meta: self.design_meta.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CodebookFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let graph = FactorGraph::from_matrix(file.f)?;
        if graph.k != file.k || graph.j != file.j || graph.n != file.n {
            return Err(Error::Validation(format!(
                "factor matrix is {}x{} with column weight {}, header says K={}, J={}, N={}",
                graph.k, graph.j, graph.n, file.k, file.j, file.n
            )));
        }
        let cbs = CodebookSet {
            m: file.m,
            graph,
            overload: file.overload,
            users: file
                .users
                .into_iter()
                .map(|u| UserCodebook {
                    id: u.id,
                    codewords: u
                        .codewords
                        .into_iter()
                        .map(|c| c.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                        .collect(),
                    labels: u.labels,
                })
                .collect(),
            design_meta: file.design_meta,
        };
        cbs.validate()?;
        Ok(cbs)
    }
}

#[derive(Serialize, Deserialize)]
struct UserFile {
    id: usize,
    codewords: Vec<Vec<[f64; 2]>>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CodebookFile {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "J")]
    j: usize,
    #[serde(rename = "N")]
    n: usize,
    overload: Option<Overload>,
    #[serde(rename = "F")]
    f: Vec<Vec<u8>>,
    users: Vec<UserFile>,
    design_meta: DesignMeta,
}

/// Build `J` codebooks: user `j`'s codeword `m` holds `z_i C[n, m]` on its
/// `n`-th occupied resource, where `z_i` is the operator the signature
/// pattern places there.
pub fn assemble(
    mc: &MotherConstellation,
    params: &OperatorParams,
    fg: &FactorGraph,
    pattern: &SignaturePattern,
) -> Result<CodebookSet> {
    if mc.dims() != fg.n {
        return domain(format!(
            "mother constellation has {} dimensions but users occupy {} resources",
            mc.dims(),
            fg.n
        ));
    }
    if !pattern.matches(fg) {
        return domain("signature pattern support differs from the factor matrix");
    }
    if params.energies.len() < pattern.operator_count() || params.angles.len() != params.energies.len() {
        return domain(format!(
            "signature pattern uses {} operators, params provide {}",
            pattern.operator_count(),
            params.energies.len()
        ));
    }
    let m = mc.size();
    if m < 2 || !m.is_power_of_two() {
        return domain(format!("M must be a power of two, got {m}"));
    }
    let z = params.operators();
    let zero = Complex64::new(0.0, 0.0);
    let users = (0..fg.j)
        .map(|j| {
            let codewords = (0..m)
                .map(|cm| {
                    let mut c = vec![zero; fg.k];
                    for (dim, &k) in fg.resources_of_user[j].iter().enumerate() {
                        let op = pattern.index[k][j].expect("pattern matches graph");
                        c[k] = z[op] * mc.rows[dim][cm];
                    }
                    c
                })
                .collect();
            UserCodebook { id: j + 1, codewords, labels: natural_labels(m) }
        })
        .collect();
    Ok(CodebookSet {
        m,
        graph: fg.clone(),
        overload: fg.overload(),
        users,
        design_meta: DesignMeta {
            t: Some(mc.source.distinct_count()),
            rho: Some(params.rho),
            phi: Some(params.phi),
            energies: Some(params.energies.clone()),
            theta: Some(params.angles.clone()),
            ..DesignMeta::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gam::build_basic_constellation;
    use crate::mother::cartesian_mother;

    #[test]
    fn builtin_graphs() {
        let g = builtin_factor_graph(Overload::P150);
        assert_eq!((g.k, g.j, g.d_f, g.n), (4, 6, 3, 2));
        let g = builtin_factor_graph(Overload::P200);
        assert_eq!((g.k, g.j, g.d_f, g.n), (5, 10, 4, 2));
        for o in [Overload::P150, Overload::P200] {
            let g = builtin_factor_graph(o);
            for j in 0..g.j {
                assert_eq!((0..g.k).map(|k| g.f[k][j] as usize).sum::<usize>(), 2);
            }
            assert!(builtin_signature(o).matches(&g));
            assert_eq!(g.overload(), Some(o));
        }
    }

    #[test]
    fn signature_first_user() {
        let z = builtin_signature(Overload::P150);
        assert_eq!(z.index[1][0], Some(0));
        assert_eq!(z.index[3][0], Some(2));
        let z = builtin_signature(Overload::P200);
        assert_eq!(z.index[0][0], Some(0));
        assert_eq!(z.index[1][0], Some(3));
    }

    #[test]
    fn irregular_matrix_is_rejected() {
        assert!(FactorGraph::from_matrix(vec![vec![1, 0], vec![1, 1]]).is_err());
    }

    fn identity_params(d_f: usize) -> OperatorParams {
        OperatorParams { energies: vec![1.0; d_f], angles: vec![0.0; d_f], rho: 0.0, phi: 0.0 }
    }

    #[test]
    fn identity_operators_embed_mother() {
        let a = build_basic_constellation(2, 1.0, 0.0, 0.0).unwrap();
        let mc = cartesian_mother(&a, 2).unwrap();
        let fg = FactorGraph::from_matrix(vec![vec![1], vec![1]]).unwrap();
        let pattern = SignaturePattern { index: vec![vec![Some(0)], vec![Some(1)]] };
        let cbs = assemble(&mc, &identity_params(2), &fg, &pattern).unwrap();
        for m in 0..4 {
            assert_eq!(cbs.users[0].codewords[m], mc.column(m));
        }
        cbs.validate().unwrap();
    }

    #[test]
    fn equal_energy_rotations_preserve_row_power() {
        let a = build_basic_constellation(4, 1.0, 0.2, 0.3).unwrap();
        let mc = cartesian_mother(&a, 2).unwrap();
        let fg = builtin_factor_graph(Overload::P150);
        let params = OperatorParams { energies: vec![1.0; 3], angles: vec![0.0, 0.7, 2.1], rho: 0.2, phi: 0.3 };
        let cbs = assemble(&mc, &params, &fg, &builtin_signature(Overload::P150)).unwrap();
        let row_power = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>();
        for j in 0..6 {
            for (dim, &k) in fg.resources_of_user[j].iter().enumerate() {
                let col: Vec<Complex64> = cbs.users[j].codewords.iter().map(|c| c[k]).collect();
                assert!((row_power(&col) - row_power(&mc.rows[dim])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = build_basic_constellation(2, 1.0, 0.0, 0.0).unwrap();
        let mc = cartesian_mother(&a, 1).unwrap();
        let fg = builtin_factor_graph(Overload::P150);
        let err = assemble(&mc, &identity_params(3), &fg, &builtin_signature(Overload::P150));
        assert!(err.is_err());
    }

    #[test]
    fn constraint_check() {
        let ok = OperatorParams { energies: vec![2.0; 3], angles: vec![0.0, 1.0, 2.0], rho: 0.5, phi: 0.1 };
        ok.check_constraints(4, 6, 4, 3).unwrap();
        let bad = OperatorParams { energies: vec![1.0; 3], ..ok.clone() };
        assert!(bad.check_constraints(4, 6, 4, 3).is_err());
        let bad = OperatorParams { rho: 3.5, ..ok.clone() };
        assert!(bad.check_constraints(4, 6, 4, 3).is_err());
        let bad = OperatorParams { angles: vec![0.0, 1.0, 4.0], ..ok };
        assert!(bad.check_constraints(4, 6, 4, 3).is_err());
    }

    #[test]
    fn imbalance_report() {
        let z = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let r = power_imbalance(&z, Some(Overload::P150));
        assert!(!r.distinct_magnitudes);
        assert_eq!(r.user_imbalance, Some(false));
        let z = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0)];
        let r = power_imbalance(&z, Some(Overload::P150));
        assert!(r.distinct_magnitudes);
        assert_eq!(r.user_imbalance, Some(true));
    }

    #[test]
    fn kappa_infinity_round_trips() {
        let meta = DesignMeta { kappa: Some(f64::INFINITY), ..DesignMeta::default() };
        let s = serde_json::to_string(&meta).unwrap();
        assert!(s.contains("\"inf\""));
        let back: DesignMeta = serde_json::from_str(&s).unwrap();
        assert_eq!(back.kappa, Some(f64::INFINITY));
    }

    #[test]
    fn natural_label_strings() {
        assert_eq!(natural_labels(4), vec!["00", "01", "10", "11"]);
        assert_eq!(natural_labels(2), vec!["0", "1"]);
    }
}
