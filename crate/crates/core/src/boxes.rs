//! Single-pair 2-2-2 correlation boxes.
//!
//! A box is the table `P(ab|XY)`. Rows are indexed by the setting pair in the
//! order `(X,Y) = (0,0),(0,1),(1,0),(1,1)` and columns by the outcome pair in
//! the order `(a,b) = (0,0),(0,1),(1,0),(1,1)`, so `table[2X+Y][2a+b]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for probability constraints.
pub const EPS_PROB: f64 = 1e-9;

/// Entry-wise tolerance for box equality.
pub const EPS_EQ: f64 = 1e-12;

pub type Table = [[f64; 4]; 4];

pub const SETTING_LABELS: [&str; 4] = ["00", "01", "10", "11"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
}

/// Row index of setting `(x, y)`.
#[inline]
pub fn setting_index(x: u8, y: u8) -> usize {
    2 * x as usize + y as usize
}

/// Column index of outcome `(a, b)`.
#[inline]
pub fn outcome_index(a: u8, b: u8) -> usize {
    2 * a as usize + b as usize
}

/// A validated 2-2-2 no-signaling box.
#[derive(Clone, PartialEq)]
pub struct CorrelationBox {
    table: Table,
}

impl fmt::Debug for CorrelationBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CorrelationBox").field("P", &self.table).finish()
    }
}

/// Worst deviations of a raw table from each constraint family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintReport {
    /// Largest amount by which an entry leaves [0, 1], with its position.
    pub range: (f64, usize, usize),
    /// Largest |row sum - 1|, with its row.
    pub normalization: (f64, usize),
    /// Largest marginal mismatch, with party and input.
    pub signaling: (f64, Party, u8),
}

impl ConstraintReport {
    pub fn of(table: &Table) -> Self {
        let mut range = (0.0, 0, 0);
        let mut normalization = (0.0, 0);
        for (r, row) in table.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let out = if v < 0.0 {
                    -v
                } else if v > 1.0 {
                    v - 1.0
                } else {
                    0.0
                };
                if out > range.0 {
                    range = (out, r, c);
                }
            }
            let dev = (row.iter().sum::<f64>() - 1.0).abs();
            if dev > normalization.0 {
                normalization = (dev, r);
            }
        }
        let mut signaling = (0.0, Party::Alice, 0);
        for input in 0..2u8 {
            let dev = (alice_zero(table, input, 0) - alice_zero(table, input, 1)).abs();
            if dev > signaling.0 {
                signaling = (dev, Party::Alice, input);
            }
            let dev = (bob_zero(table, 0, input) - bob_zero(table, 1, input)).abs();
            if dev > signaling.0 {
                signaling = (dev, Party::Bob, input);
            }
        }
        ConstraintReport {
            range,
            normalization,
            signaling,
        }
    }
}

/// `P(a=0 | X=x)` read from the row with Bob's input `y`.
fn alice_zero(t: &Table, x: u8, y: u8) -> f64 {
    let row = &t[setting_index(x, y)];
    row[0] + row[1]
}

/// `P(b=0 | Y=y)` read from the row with Alice's input `x`.
fn bob_zero(t: &Table, x: u8, y: u8) -> f64 {
    let row = &t[setting_index(x, y)];
    row[0] + row[2]
}

impl CorrelationBox {
    /// Validates a raw table. Never renormalizes.
    pub fn new(table: Table, tol: f64) -> Result<Self> {
        for (r, row) in table.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        let report = ConstraintReport::of(&table);
        let (dev, row, col) = report.range;
        if dev > tol {
            return Err(Error::NegativeEntry {
                row,
                col,
                value: table[row][col],
            });
        }
        let (dev, row) = report.normalization;
        if dev > tol {
            return Err(Error::RowNotNormalized {
                row,
                setting: SETTING_LABELS[row],
                sum: table[row].iter().sum(),
            });
        }
        let (dev, party, input) = report.signaling;
        if dev > tol {
            return Err(Error::SignalingDetected {
                party,
                input,
                deviation: dev,
            });
        }
        Ok(CorrelationBox { table })
    }

    pub(crate) fn from_table_unchecked(table: Table) -> Self {
        CorrelationBox { table }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn row(&self, setting: usize) -> [f64; 4] {
        self.table[setting]
    }

    pub fn prob(&self, a: u8, b: u8, x: u8, y: u8) -> f64 {
        self.table[setting_index(x, y)][outcome_index(a, b)]
    }

    /// `<XY> = sum_ab (-1)^(a xor b) P(ab|XY)`.
    pub fn correlator(&self, setting: usize) -> f64 {
        let r = &self.table[setting];
        r[0] - r[1] - r[2] + r[3]
    }

    /// `A_XY = P(01|XY) + P(10|XY)`.
    pub fn anti_correlation(&self, setting: usize) -> f64 {
        let r = &self.table[setting];
        r[1] + r[2]
    }

    /// Alice's `<A_x>`, averaged over Bob's inputs.
    pub fn alice_mean(&self, x: u8) -> f64 {
        let m = 0.5 * (alice_zero(&self.table, x, 0) + alice_zero(&self.table, x, 1));
        2.0 * m - 1.0
    }

    /// Bob's `<B_y>`, averaged over Alice's inputs.
    pub fn bob_mean(&self, y: u8) -> f64 {
        let m = 0.5 * (bob_zero(&self.table, 0, y) + bob_zero(&self.table, 1, y));
        2.0 * m - 1.0
    }

    /// Entry-wise equality within `tol`.
    pub fn approx_eq(&self, other: &CorrelationBox, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn max_abs_diff(&self, other: &CorrelationBox) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.table[r][c] - other.table[r][c]).abs());
            }
        }
        worst
    }

    /// Box with `a -> a xor alice_flip(X)` and `b -> b xor bob_flip(Y)`,
    /// inputs relabeled `X -> X xor x_flip`, `Y -> Y xor y_flip`.
    ///
    /// The result is `P'(ab|XY) = P(a^fa(X), b^fb(Y) | X^x_flip, Y^y_flip)`.
    pub fn relabel(&self, map: Relabeling) -> CorrelationBox {
        let mut t = [[0.0; 4]; 4];
        for x in 0..2u8 {
            for y in 0..2u8 {
                let src = setting_index(x ^ map.x_flip, y ^ map.y_flip);
                for a in 0..2u8 {
                    for b in 0..2u8 {
                        let sa = a ^ map.alice_out[x as usize];
                        let sb = b ^ map.bob_out[y as usize];
                        t[setting_index(x, y)][outcome_index(a, b)] =
                            self.table[src][outcome_index(sa, sb)];
                    }
                }
            }
        }
        CorrelationBox { table: t }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BoxJson { p: self.table }).expect("table serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&BoxJson { p: self.table }).expect("table serializes")
    }

    pub fn from_json(s: &str, tol: f64) -> Result<Self> {
        let parsed: BoxJson = serde_json::from_str(s)?;
        CorrelationBox::new(parsed.p, tol)
    }
}

/// Input/output relabeling of a box. `alice_out[x]` is XORed into Alice's
/// outcome when her (new) input is `x`; likewise for Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Relabeling {
    pub x_flip: u8,
    pub y_flip: u8,
    pub alice_out: [u8; 2],
    pub bob_out: [u8; 2],
}

/// On-disk box schema: `{"P": [[..4..], [..4..], [..4..], [..4..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxJson {
    #[serde(rename = "P")]
    pub p: Table,
}

impl Serialize for CorrelationBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoxJson { p: self.table }.serialize(s)
    }
}

/// Builds a box from deterministic outcome functions of the local inputs.
pub fn deterministic_box(a: impl Fn(u8) -> u8, b: impl Fn(u8) -> u8) -> CorrelationBox {
    let mut t = [[0.0; 4]; 4];
    for x in 0..2u8 {
        for y in 0..2u8 {
            t[setting_index(x, y)][outcome_index(a(x) & 1, b(y) & 1)] = 1.0;
        }
    }
    CorrelationBox { table: t }
}

/// The canonical PR box: `P(ab|XY) = 1/2` iff `a xor b = XY`.
pub fn pr_box() -> CorrelationBox {
    let mut t = [[0.0; 4]; 4];
    for x in 0..2u8 {
        for y in 0..2u8 {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    if a ^ b == x & y {
                        t[setting_index(x, y)][outcome_index(a, b)] = 0.5;
                    }
                }
            }
        }
    }
    CorrelationBox { table: t }
}

/// Every entry 1/4.
pub fn uniform_box() -> CorrelationBox {
    CorrelationBox {
        table: [[0.25; 4]; 4],
    }
}

/// A local deterministic vertex `a = alpha0 xor alpha1·X`, `b = beta0 xor beta1·Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalVertex {
    pub alpha0: u8,
    pub alpha1: u8,
    pub beta0: u8,
    pub beta1: u8,
}

impl LocalVertex {
    pub fn to_box(self) -> CorrelationBox {
        deterministic_box(
            |x| self.alpha0 ^ (self.alpha1 & x),
            |y| self.beta0 ^ (self.beta1 & y),
        )
    }

    /// The `(family, r)` label when this vertex is one of the eight
    /// deterministic points saturating the canonical CHSH facet.
    pub fn family(self) -> Option<(u8, u8)> {
        let r = self.alpha0;
        match (self.alpha1, self.beta1) {
            (0, 0) if self.beta0 == r => Some((1, r)),
            (1, 0) if self.beta0 == r => Some((2, r)),
            (0, 1) if self.beta0 == r => Some((3, r)),
            (1, 1) if self.beta0 == r ^ 1 => Some((4, r)),
            _ => None,
        }
    }

    /// `D{family}_{r}` for facet-saturating vertices, `L_{a0}{a1}{b0}{b1}` otherwise.
    pub fn name(self) -> String {
        match self.family() {
            Some((f, r)) => format!("D{f}_{r}"),
            None => format!(
                "L_{}{}{}{}",
                self.alpha0, self.alpha1, self.beta0, self.beta1
            ),
        }
    }

    pub fn from_family(family: u8, r: u8) -> Result<Self> {
        if !(1..=4).contains(&family) || r > 1 {
            return Err(Error::BadFamily { family, r });
        }
        let (alpha1, beta1, beta0) = match family {
            1 => (0, 0, r),
            2 => (1, 0, r),
            3 => (0, 1, r),
            _ => (1, 1, r ^ 1),
        };
        Ok(LocalVertex {
            alpha0: r,
            alpha1,
            beta0,
            beta1,
        })
    }
}

/// Deterministic vertex `D_family^r`:
/// family 1: `a=r, b=r`; 2: `a=X^r, b=r`; 3: `a=r, b=Y^r`; 4: `a=X^r, b=Y^r^1`.
pub fn deterministic_vertex(family: u8, r: u8) -> Result<CorrelationBox> {
    Ok(LocalVertex::from_family(family, r)?.to_box())
}

/// The sixteen local vertices. The eight facet-saturating vertices come first
/// in the order `D1_0, D1_1, D2_0, D2_1, D3_0, D3_1, D4_0, D4_1`; the other
/// eight follow in lexicographic `(alpha0, alpha1, beta0, beta1)` order.
pub fn local_vertices() -> Vec<LocalVertex> {
    let mut out = Vec::with_capacity(16);
    for family in 1..=4 {
        for r in 0..2 {
            out.push(LocalVertex::from_family(family, r).expect("valid family"));
        }
    }
    for bits in 0..16u8 {
        let v = LocalVertex {
            alpha0: (bits >> 3) & 1,
            alpha1: (bits >> 2) & 1,
            beta0: (bits >> 1) & 1,
            beta1: bits & 1,
        };
        if v.family().is_none() {
            out.push(v);
        }
    }
    out
}

pub fn all_local_vertices() -> Vec<CorrelationBox> {
    local_vertices().into_iter().map(LocalVertex::to_box).collect()
}

/// A mixture component: a named vertex or an explicit box.
#[derive(Debug, Clone)]
pub enum Component {
    Local(LocalVertex),
    /// Nonlocal vertex maximally violating CHSH facet `f` (see [`crate::chsh::FACETS`]).
    Pr(usize),
    Box(CorrelationBox),
}

impl Component {
    pub fn to_box(&self) -> CorrelationBox {
        match self {
            Component::Local(v) => v.to_box(),
            Component::Pr(f) => crate::chsh::pr_on_facet(*f),
            Component::Box(b) => b.clone(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct MixtureSpec {
    pub components: Vec<(f64, Component)>,
}

impl MixtureSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, weight: f64, c: Component) -> Self {
        self.components.push((weight, c));
        self
    }
}

/// Entry-wise convex combination.
pub fn mix(spec: &MixtureSpec) -> Result<CorrelationBox> {
    let mut sum = 0.0;
    for (i, (w, _)) in spec.components.iter().enumerate() {
        if !w.is_finite() || *w < 0.0 {
            return Err(Error::NegativeWeight {
                index: i,
                weight: *w,
            });
        }
        sum += w;
    }
    if (sum - 1.0).abs() > EPS_PROB {
        return Err(Error::WeightsNotNormalized { sum });
    }
    let mut t = [[0.0; 4]; 4];
    for (w, c) in &spec.components {
        let b = c.to_box();
        for r in 0..4 {
            for col in 0..4 {
                t[r][col] += w * b.table[r][col];
            }
        }
    }
    CorrelationBox::new(t, EPS_PROB)
}

/// The five representative mixture classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassId {
    I,
    II,
    III,
    IV,
    V,
}

impl ClassId {
    pub fn parse(s: &str) -> Option<ClassId> {
        match s {
            "I" | "1" => Some(ClassId::I),
            "II" | "2" => Some(ClassId::II),
            "III" | "3" => Some(ClassId::III),
            "IV" | "4" => Some(ClassId::IV),
            "V" | "5" => Some(ClassId::V),
            _ => None,
        }
    }

    /// Deterministic vertices mixed with the PR box, in parameter order.
    fn partners(self) -> &'static [(u8, u8)] {
        match self {
            ClassId::I => &[(1, 0)],
            ClassId::II => &[(2, 0)],
            ClassId::III => &[(1, 0), (1, 1)],
            ClassId::IV => &[(2, 0), (2, 1)],
            ClassId::V => &[(1, 0), (2, 0), (3, 0), (4, 0)],
        }
    }

    /// Number of weights: the PR weight followed by one per partner vertex.
    pub fn arity(self) -> usize {
        1 + self.partners().len()
    }
}

#[derive(Debug, Clone)]
pub struct ClassBox {
    pub class: ClassId,
    pub weights: Vec<f64>,
    pub boxed: CorrelationBox,
    /// Single-copy CHSH, `2 + 2·p_PR`.
    pub predicted_chsh: f64,
}

impl ClassBox {
    pub fn mixture(&self) -> MixtureSpec {
        let mut spec = MixtureSpec::new().with(self.weights[0], Component::Pr(0));
        for (w, &(f, r)) in self.weights[1..].iter().zip(self.class.partners()) {
            spec = spec.with(
                *w,
                Component::Local(LocalVertex::from_family(f, r).expect("valid family")),
            );
        }
        spec
    }
}

/// `p·PR + sum_i p_i·D_i`. Classes I and II take either `[p]` or `[p, 1-p]`;
/// classes III–V take all weights, PR weight first. With `strict` every weight
/// must lie strictly inside (0, 1).
pub fn class_generator(class: ClassId, params: &[f64], strict: bool) -> Result<ClassBox> {
    let weights: Vec<f64> = match (class, params.len()) {
        (ClassId::I | ClassId::II, 1) => vec![params[0], 1.0 - params[0]],
        (_, n) if n == class.arity() => params.to_vec(),
        (_, n) => {
            return Err(Error::BadParams(format!(
                "class {class:?} takes {} weights, got {n}",
                class.arity()
            )))
        }
    };
    for (i, &w) in weights.iter().enumerate() {
        let ok = if strict {
            w > 0.0 && w < 1.0
        } else {
            (0.0..=1.0).contains(&w)
        };
        if !w.is_finite() || !ok {
            return Err(Error::BadParams(format!(
                "weight {i} = {w} must lie in {}",
                if strict { "(0, 1)" } else { "[0, 1]" }
            )));
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > EPS_PROB {
        return Err(Error::BadParams(format!("weights sum to {sum}, not 1")));
    }
    let mut cb = ClassBox {
        class,
        predicted_chsh: 2.0 + 2.0 * weights[0],
        weights,
        boxed: uniform_box(),
    };
    cb.boxed = mix(&cb.mixture())?;
    Ok(cb)
}
