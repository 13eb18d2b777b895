//! Graded pieces R_m of the coordinate ring of an embedded variety, built
//! from explicit ideal generators by pure linear algebra (no Groebner bases),
//! plus the multiplication structure feeding the Koszul differentials.
//!
//! Graded pieces and multiplication tensors are memoized in-process and can
//! be persisted to an on-disk cache keyed by (model hash, field, degree).

use crate::field::{FieldSpec, Scalar};
use crate::poly::{default_variables, MonomialBasis, Poly, PolyError};
use crate::sparse::{Echelon, SparseMatrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("generator {0} is not homogeneous")]
    InhomogeneousGenerator(usize),
    #[error("generator {0} has coefficients outside field {1}")]
    GeneratorField(usize, String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error("bad model json: {0}")]
    ModelJson(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// An embedded variety presented by homogeneous ideal generators in r+1
/// variables. Immutable after construction; degree computations are memoized
/// behind locks so a presentation can be shared across threads.
pub struct Presentation {
    ambient_dim: usize,
    variables: Vec<String>,
    generators: Vec<Poly>,
    field: FieldSpec,
    label: String,
    hilbert_hint: Option<Vec<usize>>,
    /// Set when a degree-1 generator is present (ambient not minimal).
    non_minimal_ambient: bool,
    model_hash: String,
    cache_dir: Option<PathBuf>,
    bases: RwLock<HashMap<usize, Arc<MonomialBasis>>>,
    ideal_pieces: RwLock<HashMap<usize, Arc<Echelon>>>,
    pieces: RwLock<HashMap<usize, Arc<GradedPiece>>>,
    tensors: RwLock<HashMap<usize, Arc<MultTensor>>>,
}

/// The degree-m slice of the quotient ring: the monomial complement of the
/// ideal piece plus the map rewriting every ambient monomial in that basis.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub degree: usize,
    pub ambient_monomial_count: usize,
    pub ideal_dim: usize,
    /// Ambient monomial indices of the non-pivot complement, ascending.
    pub quotient_basis: Vec<usize>,
    /// dim R_m x ambient_monomial_count; restricted to the quotient basis
    /// columns it is the identity.
    pub reduction: SparseMatrix,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.quotient_basis.len()
    }

    /// Column view of the reduction map, indexed by ambient monomial.
    pub fn reduction_columns(&self) -> Vec<Vec<(u32, Scalar)>> {
        let mut cols = vec![Vec::new(); self.ambient_monomial_count];
        for (r, c, v) in self.reduction.entries() {
            cols[*c as usize].push((*r, v.clone()));
        }
        cols
    }
}

/// Multiplication R_a -> R_{a+1} by each variable, stored column-wise.
#[derive(Debug, Clone)]
pub struct MultTensor {
    pub degree: usize,
    /// actions[i].cols[alpha] lists (row, coeff) of x_i * (basis monomial alpha).
    pub actions: Vec<VarAction>,
    pub target_dim: usize,
}

#[derive(Debug, Clone)]
pub struct VarAction {
    pub cols: Vec<Vec<(u32, Scalar)>>,
}

impl MultTensor {
    /// The action of x_i as a sparse matrix R_a -> R_{a+1}.
    pub fn matrix(&self, var: usize, field: FieldSpec) -> SparseMatrix {
        let action = &self.actions[var];
        let mut triplets = Vec::new();
        for (col, entries) in action.cols.iter().enumerate() {
            for (row, v) in entries {
                triplets.push((*row, col as u32, v.clone()));
            }
        }
        SparseMatrix::from_triplets(self.target_dim, action.cols.len(), triplets, field)
            .expect("tensor entries in range")
    }

    /// All variable actions stacked side by side: the full map R_a (x) V -> R_{a+1}.
    pub fn stacked(&self, field: FieldSpec) -> SparseMatrix {
        let src = self.actions.first().map_or(0, |a| a.cols.len());
        let mut triplets = Vec::new();
        for (i, action) in self.actions.iter().enumerate() {
            for (col, entries) in action.cols.iter().enumerate() {
                for (row, v) in entries {
                    triplets.push((*row, (i * src + col) as u32, v.clone()));
                }
            }
        }
        SparseMatrix::from_triplets(self.target_dim, src * self.actions.len(), triplets, field)
            .expect("tensor entries in range")
    }
}

impl Presentation {
    pub fn new(
        ambient_dim: usize,
        generators: Vec<Poly>,
        field: FieldSpec,
        label: impl Into<String>,
    ) -> Result<Presentation, RingError> {
        Presentation::with_options(
            ambient_dim,
            default_variables(ambient_dim + 1),
            generators,
            field,
            label,
            None,
        )
    }

    pub fn with_options(
        ambient_dim: usize,
        variables: Vec<String>,
        generators: Vec<Poly>,
        field: FieldSpec,
        label: impl Into<String>,
        hilbert_hint: Option<Vec<usize>>,
    ) -> Result<Presentation, RingError> {
        let nvars = ambient_dim + 1;
        assert_eq!(variables.len(), nvars, "one name per variable");
        let mut non_minimal = false;
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() {
                return Err(RingError::ZeroGenerator(i));
            }
            if !g.is_homogeneous() {
                return Err(RingError::InhomogeneousGenerator(i));
            }
            assert_eq!(g.nvars, nvars, "generator in the ambient variables");
            if !g.terms.iter().all(|(_, c)| field.owns(c)) {
                return Err(RingError::GeneratorField(i, field.to_string()));
            }
            if g.degree() == Some(1) {
                non_minimal = true;
            }
        }
        let label = label.into();
        let mut p = Presentation {
            ambient_dim,
            variables,
            generators,
            field,
            label,
            hilbert_hint,
            non_minimal_ambient: non_minimal,
            model_hash: String::new(),
            cache_dir: None,
            bases: RwLock::new(HashMap::new()),
            ideal_pieces: RwLock::new(HashMap::new()),
            pieces: RwLock::new(HashMap::new()),
            tensors: RwLock::new(HashMap::new()),
        };
        p.model_hash = p.compute_hash();
        Ok(p)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn nvars(&self) -> usize {
        self.ambient_dim + 1
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hilbert_hint(&self) -> Option<&[usize]> {
        self.hilbert_hint.as_deref()
    }

    /// True when a linear generator is present, i.e. the ambient space is
    /// not minimal for this model.
    pub fn non_minimal_ambient(&self) -> bool {
        self.non_minimal_ambient
    }

    pub fn model_hash(&self) -> &str {
        &self.model_hash
    }

    /// Enables the on-disk cache rooted at `dir` for this presentation.
    pub fn set_cache_dir(&mut self, dir: Option<PathBuf>) {
        self.cache_dir = dir;
    }

    fn compute_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.ambient_dim.to_le_bytes());
        hasher.update(self.field.to_string().as_bytes());
        for v in &self.variables {
            hasher.update(v.as_bytes());
            hasher.update([0u8]);
        }
        for g in &self.generators {
            hasher.update(g.render(&self.variables).as_bytes());
            hasher.update([0u8]);
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        hex
    }

    pub fn monomial_basis(&self, m: usize) -> Arc<MonomialBasis> {
        if let Some(b) = self.bases.read().unwrap().get(&m) {
            return b.clone();
        }
        let b = MonomialBasis::new(self.nvars(), m);
        self.bases.write().unwrap().entry(m).or_insert(b).clone()
    }

    /// Canonical echelon basis of the degree-m piece of the ideal, obtained
    /// by multiplying each generator by all monomials of complementary
    /// degree and reducing. Idempotent and cached.
    pub fn ideal_degree_piece(&self, m: usize) -> Arc<Echelon> {
        if let Some(e) = self.ideal_pieces.read().unwrap().get(&m) {
            return e.clone();
        }
        let basis = self.monomial_basis(m);
        let mut triplets = Vec::new();
        let mut row: u32 = 0;
        for g in &self.generators {
            let d = g.degree().expect("generators are nonzero");
            if d > m {
                continue;
            }
            let multipliers = self.monomial_basis(m - d);
            for u in &multipliers.list {
                for (mono, c) in &g.terms {
                    let prod: Vec<u8> = mono.iter().zip(u).map(|(a, b)| a + b).collect();
                    let col = basis.index_of(&prod).expect("product stays in degree m");
                    triplets.push((row, col as u32, c.clone()));
                }
                row += 1;
            }
        }
        let mat = SparseMatrix::from_triplets(row as usize, basis.len(), triplets, self.field)
            .expect("ideal rows are in range");
        let ech = Arc::new(mat.row_echelon());
        self.ideal_pieces
            .write()
            .unwrap()
            .entry(m)
            .or_insert(ech)
            .clone()
    }

    /// The degree-m piece of the quotient ring.
    pub fn graded_piece(&self, m: usize) -> Arc<GradedPiece> {
        if let Some(p) = self.pieces.read().unwrap().get(&m) {
            return p.clone();
        }
        if let Some(p) = self.load_piece(m) {
            return self.pieces.write().unwrap().entry(m).or_insert(p).clone();
        }
        let ech = self.ideal_degree_piece(m);
        let ambient = self.monomial_basis(m).len();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; ambient];
            for &c in &ech.pivots {
                v[c] = true;
            }
            v
        };
        let quotient_basis: Vec<usize> = (0..ambient).filter(|&c| !pivot_set[c]).collect();
        let position: HashMap<usize, usize> = quotient_basis
            .iter()
            .enumerate()
            .map(|(pos, &c)| (c, pos))
            .collect();
        let mut triplets = Vec::new();
        for (pos, &c) in quotient_basis.iter().enumerate() {
            triplets.push((pos as u32, c as u32, self.field.one()));
        }
        // a pivot monomial rewrites as minus the non-pivot tail of its row
        for (r, c, v) in ech.matrix.entries() {
            let pc = ech.pivots[*r as usize];
            if *c as usize != pc {
                let pos = position[&(*c as usize)];
                triplets.push((pos as u32, pc as u32, self.field.neg(v)));
            }
        }
        let reduction =
            SparseMatrix::from_triplets(quotient_basis.len(), ambient, triplets, self.field)
                .expect("reduction entries in range");
        let piece = Arc::new(GradedPiece {
            degree: m,
            ambient_monomial_count: ambient,
            ideal_dim: ech.pivots.len(),
            quotient_basis,
            reduction,
        });
        self.store_piece(&piece);
        self.pieces
            .write()
            .unwrap()
            .entry(m)
            .or_insert(piece)
            .clone()
    }

    pub fn dim_r(&self, m: isize) -> usize {
        if m < 0 {
            return 0;
        }
        self.graded_piece(m as usize).dim()
    }

    /// Multiplication R_a (x) V -> R_{a+1} as one sparse block per variable.
    /// Commutes: the composite actions of x_i then x_j and x_j then x_i agree.
    pub fn mult_tensor(&self, a: usize) -> Arc<MultTensor> {
        if let Some(t) = self.tensors.read().unwrap().get(&a) {
            return t.clone();
        }
        if let Some(t) = self.load_tensor(a) {
            return self.tensors.write().unwrap().entry(a).or_insert(t).clone();
        }
        let src = self.graded_piece(a);
        let dst = self.graded_piece(a + 1);
        let src_basis = self.monomial_basis(a);
        let dst_basis = self.monomial_basis(a + 1);
        let dst_cols = dst.reduction_columns();
        let mut actions = Vec::with_capacity(self.nvars());
        for var in 0..self.nvars() {
            let mut cols = Vec::with_capacity(src.dim());
            for &mono_idx in &src.quotient_basis {
                let mut m = src_basis.list[mono_idx].clone();
                m[var] += 1;
                let target = dst_basis.index_of(&m).expect("degree a+1 monomial");
                cols.push(dst_cols[target].clone());
            }
            actions.push(VarAction { cols });
        }
        let tensor = Arc::new(MultTensor {
            degree: a,
            actions,
            target_dim: dst.dim(),
        });
        self.store_tensor(&tensor);
        self.tensors
            .write()
            .unwrap()
            .entry(a)
            .or_insert(tensor)
            .clone()
    }

    /// Compares computed dimensions against the declared Hilbert function.
    pub fn check_hilbert(&self, upto: usize) -> Result<(), HilbertMismatch> {
        let Some(hint) = self.hilbert_hint.clone() else {
            return Ok(());
        };
        for m in 0..=upto.min(hint.len().saturating_sub(1)) {
            let got = self.dim_r(m as isize);
            if got != hint[m] {
                return Err(HilbertMismatch {
                    degree: m,
                    expected: hint[m],
                    computed: got,
                });
            }
        }
        Ok(())
    }

    fn cache_path(&self, kind: &str, degree: usize) -> Option<PathBuf> {
        let dir = self.cache_dir.as_ref()?;
        Some(dir.join(format!("{}-{kind}-{degree}.json", self.model_hash)))
    }

    fn load_piece(&self, m: usize) -> Option<Arc<GradedPiece>> {
        let path = self.cache_path("piece", m)?;
        let text = std::fs::read_to_string(path).ok()?;
        let raw: PieceJson = serde_json::from_str(&text).ok()?;
        raw.into_piece(self.field).ok().map(Arc::new)
    }

    fn store_piece(&self, piece: &GradedPiece) {
        let Some(path) = self.cache_path("piece", piece.degree) else {
            return;
        };
        let raw = PieceJson::from_piece(piece, self.field);
        let _ = atomic_write_json(&path, &raw);
    }

    fn load_tensor(&self, a: usize) -> Option<Arc<MultTensor>> {
        let path = self.cache_path("mult", a)?;
        let text = std::fs::read_to_string(path).ok()?;
        let raw: TensorJson = serde_json::from_str(&text).ok()?;
        raw.into_tensor(self.field).ok().map(Arc::new)
    }

    fn store_tensor(&self, tensor: &MultTensor) {
        let Some(path) = self.cache_path("mult", tensor.degree) else {
            return;
        };
        let raw = TensorJson::from_tensor(tensor, self.field);
        let _ = atomic_write_json(&path, &raw);
    }

    pub fn to_model_json(&self) -> ModelJson {
        ModelJson {
            ambient_dim: self.ambient_dim,
            variables: Some(self.variables.clone()),
            generators: self
                .generators
                .iter()
                .map(|g| g.render(&self.variables))
                .collect(),
            field: self.field.to_string(),
            hilbert_hint: self.hilbert_hint.clone(),
            label: Some(self.label.clone()),
        }
    }

    pub fn from_model_json(json: &ModelJson) -> Result<Presentation, RingError> {
        let field = FieldSpec::parse(&json.field)?;
        let variables = json
            .variables
            .clone()
            .unwrap_or_else(|| default_variables(json.ambient_dim + 1));
        if variables.len() != json.ambient_dim + 1 {
            return Err(RingError::ModelJson(format!(
                "{} variables for ambient dimension {}",
                variables.len(),
                json.ambient_dim
            )));
        }
        let generators = json
            .generators
            .iter()
            .map(|s| Poly::parse(s, &variables, field))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::with_options(
            json.ambient_dim,
            variables,
            generators,
            field,
            json.label.clone().unwrap_or_else(|| "model".to_string()),
            json.hilbert_hint.clone(),
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("Hilbert mismatch in degree {degree}: expected {expected}, computed {computed}")]
pub struct HilbertMismatch {
    pub degree: usize,
    pub expected: usize,
    pub computed: usize,
}

/// The interchange format for models.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelJson {
    pub ambient_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    pub generators: Vec<String>,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert_hint: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    degree: usize,
    ambient_monomial_count: usize,
    ideal_dim: usize,
    quotient_basis: Vec<usize>,
    reduction: Vec<(u32, u32, String)>,
}

impl PieceJson {
    fn from_piece(p: &GradedPiece, field: FieldSpec) -> PieceJson {
        PieceJson {
            degree: p.degree,
            ambient_monomial_count: p.ambient_monomial_count,
            ideal_dim: p.ideal_dim,
            quotient_basis: p.quotient_basis.clone(),
            reduction: p
                .reduction
                .entries()
                .iter()
                .map(|(r, c, v)| (*r, *c, field.scalar_to_string(v)))
                .collect(),
        }
    }

    fn into_piece(self, field: FieldSpec) -> Result<GradedPiece, RingError> {
        let triplets = self
            .reduction
            .iter()
            .map(|(r, c, s)| Ok((*r, *c, field.scalar_from_str(s)?)))
            .collect::<Result<Vec<_>, RingError>>()?;
        let reduction = SparseMatrix::from_triplets(
            self.quotient_basis.len(),
            self.ambient_monomial_count,
            triplets,
            field,
        )
        .map_err(|e| RingError::ModelJson(e.to_string()))?;
        Ok(GradedPiece {
            degree: self.degree,
            ambient_monomial_count: self.ambient_monomial_count,
            ideal_dim: self.ideal_dim,
            quotient_basis: self.quotient_basis,
            reduction,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    degree: usize,
    target_dim: usize,
    actions: Vec<Vec<Vec<(u32, String)>>>,
}

impl TensorJson {
    fn from_tensor(t: &MultTensor, field: FieldSpec) -> TensorJson {
        TensorJson {
            degree: t.degree,
            target_dim: t.target_dim,
            actions: t
                .actions
                .iter()
                .map(|a| {
                    a.cols
                        .iter()
                        .map(|col| {
                            col.iter()
                                .map(|(r, v)| (*r, field.scalar_to_string(v)))
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }

    fn into_tensor(self, field: FieldSpec) -> Result<MultTensor, RingError> {
        let actions = self
            .actions
            .into_iter()
            .map(|a| {
                let cols = a
                    .into_iter()
                    .map(|col| {
                        col.into_iter()
                            .map(|(r, s)| Ok((r, field.scalar_from_str(&s)?)))
                            .collect::<Result<Vec<_>, RingError>>()
                    })
                    .collect::<Result<Vec<_>, RingError>>()?;
                Ok(VarAction { cols })
            })
            .collect::<Result<Vec<_>, RingError>>()?;
        Ok(MultTensor {
            degree: self.degree,
            actions,
            target_dim: self.target_dim,
        })
    }
}

fn atomic_write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, serde_json::to_vec(value)?)?;
    std::fs::rename(&tmp, path)
}
