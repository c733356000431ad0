//! Divisor classes on the Kummer side written in the basis `L, E0, E_ij` of `Lambda(16, 6)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{dynkin_gram, lambda_16_6, GramLattice};
use crate::algebra::rational::{fmt as qfmt, int, is_zero, Rational};
use crate::algebra::QMatrix;
use crate::error::Result;
use crate::report::CheckItem;

const PAIRS: [(usize, usize); 15] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 6),
    (2, 3),
    (2, 4),
    (2, 5),
    (2, 6),
    (3, 4),
    (3, 5),
    (3, 6),
    (4, 5),
    (4, 6),
    (5, 6),
];

/// Classes forming a copy of `E8(-1)`, in chain order with the branch at the fifth.
pub const E8_COPY: [&str; 8] = ["C12", "E26", "C16", "E16", "C0", "E14", "C14", "E15"];

/// Eight disjoint roots orthogonal to the `E8` copy.
pub const OCTET: [&str; 8] = ["E35", "e1", "e2", "e3", "e4", "e5", "C23", "alpha(C23)"];

/// Classes `Q1..Q24` of the elliptic fibration with an `I5*` fiber, in order.
pub const Q_LABELS: [&str; 24] = [
    "C23",
    "alpha(C23)",
    "E23",
    "C12",
    "E26",
    "C16",
    "E16",
    "C0",
    "E14",
    "E15",
    "C14",
    "C15",
    "f6",
    "e6",
    "f1",
    "e1",
    "f2",
    "e2",
    "f3",
    "e3",
    "f4",
    "e4",
    "f5",
    "e5",
];

pub fn lambda_basis_labels() -> Vec<String> {
    let mut v = vec!["L".to_string(), "E0".to_string()];
    v.extend(PAIRS.iter().map(|(i, j)| format!("E{i}{j}")));
    v
}

pub fn ambient_index(label: &str) -> Option<usize> {
    lambda_basis_labels().iter().position(|l| l == label)
}

fn e_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    2 + PAIRS.iter().position(|&p| p == (a, b)).expect("pair of distinct indices in 1..=6")
}

fn zero() -> Vec<Rational> {
    vec![Rational::ZERO; 17]
}

fn half() -> Rational {
    Rational::ONE / int(2)
}

/// `C0`, `C1j` and `Cjk` as half-integral vectors.
pub fn glue_vectors() -> Vec<(String, Vec<Rational>)> {
    let h = half();
    let mut out = Vec::new();
    let mut c0 = zero();
    c0[0] = h.clone();
    c0[1] = -h.clone();
    for k in 2..=6 {
        c0[e_index(1, k)] = -h.clone();
    }
    out.push(("C0".to_string(), c0));
    for j in 2..=6 {
        let mut c = zero();
        c[0] = h.clone();
        c[1] = -h.clone();
        for k in (1..=6).filter(|&k| k != j) {
            c[e_index(j, k)] = -h.clone();
        }
        out.push((format!("C1{j}"), c));
    }
    for j in 2..=6 {
        for k in j + 1..=6 {
            let rest: Vec<usize> = (2..=6).filter(|&x| x != j && x != k).collect();
            let (l, m, n) = (rest[0], rest[1], rest[2]);
            let mut c = zero();
            c[0] = h.clone();
            for (a, b) in [(1, j), (j, k), (1, k), (l, m), (m, n), (l, n)] {
                c[e_index(a, b)] = -h.clone();
            }
            out.push((format!("C{j}{k}"), c));
        }
    }
    out
}

/// `L -> 3L - 4E0`, `E0 -> 2L - 3E0`, `E_ij` fixed.
pub fn alpha(v: &[Rational]) -> Vec<Rational> {
    let mut w = v.to_vec();
    w[0] = int(3) * &v[0] + int(2) * &v[1];
    w[1] = int(-4) * &v[0] - int(3) * &v[1];
    w
}

pub fn alpha_matrix() -> QMatrix {
    let rows: Vec<Vec<Rational>> = (0..17)
        .map(|i| {
            let mut e = zero();
            e[i] = int(1);
            alpha(&e)
        })
        .collect();
    QMatrix::from_rows(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisorClass {
    pub label: String,
    pub coords: Vec<Rational>,
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = lambda_basis_labels();
        let mut first = true;
        for (c, l) in self.coords.iter().zip(&labels) {
            if is_zero(c) {
                continue;
            }
            let neg = *c < Rational::ZERO;
            let a = if neg { -c.clone() } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coef = if a == Rational::ONE { String::new() } else { format!("{}*", qfmt(&a)) };
            write!(f, "{sign}{coef}{l}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DivisorClass", 3)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("coords", &self.coords.iter().map(qfmt).collect::<Vec<_>>())?;
        st.serialize_field("expression", &self.to_string())?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NarukiClasses {
    pub classes: BTreeMap<String, DivisorClass>,
    pub fiber: DivisorClass,
    /// `(Qk, label)` for `k = 1..24`.
    pub q_labels: Vec<(String, String)>,
}

impl NarukiClasses {
    pub fn get(&self, label: &str) -> &[Rational] {
        if label == "F" {
            return &self.fiber.coords;
        }
        &self.classes.get(label).unwrap_or_else(|| panic!("unknown class {label}")).coords
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairMismatch {
    pub first: String,
    pub second: String,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NarukiReport {
    pub checks: Vec<CheckItem>,
    pub mismatches: Vec<PairMismatch>,
    /// Gram matrix of `Q1..Q24`.
    pub gram: Vec<Vec<String>>,
}

impl NarukiReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.mismatches.is_empty()
    }

    pub fn check(&self, name: &str) -> Option<&CheckItem> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn combo(terms: &[(i64, &str)], known: &BTreeMap<String, DivisorClass>) -> Vec<Rational> {
    let mut v = zero();
    for &(c, label) in terms {
        let base: Vec<Rational> = match ambient_index(label) {
            Some(i) => {
                let mut e = zero();
                e[i] = int(1);
                e
            }
            None => known.get(label).unwrap_or_else(|| panic!("unknown class {label}")).coords.clone(),
        };
        for (a, b) in v.iter_mut().zip(base) {
            *a += int(c) * b;
        }
    }
    v
}

/// `k (L - E0)` followed by the listed exceptional terms.
fn pencil(k: i64, terms: &[(i64, &str)]) -> Vec<Rational> {
    let mut all = vec![(k, "L"), (-k, "E0")];
    all.extend_from_slice(terms);
    combo(&all, &BTreeMap::new())
}

fn expected_diagram() -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; 24]; 24];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = -2;
    }
    let mut edges: Vec<(usize, usize, i64)> = vec![
        (1, 3, 1),
        (2, 3, 1),
        (3, 4, 1),
        (4, 5, 1),
        (5, 6, 1),
        (6, 7, 1),
        (7, 8, 1),
        (8, 9, 1),
        (8, 10, 1),
        (9, 11, 1),
        (10, 12, 1),
    ];
    for k in (13..=23).step_by(2) {
        edges.push((11, k, 1));
        edges.push((12, k + 1, 1));
        edges.push((k, k + 1, 2));
    }
    for (a, b, w) in edges {
        m[a - 1][b - 1] = w;
        m[b - 1][a - 1] = w;
    }
    m
}

/// Builds the classes and checks their intersection data inside `Lambda(16, 6)`.
pub fn naruki_classes() -> Result<(NarukiClasses, NarukiReport)> {
    let lam = lambda_16_6()?;
    let ambient: &GramLattice = &lam.ambient;
    let mut classes: BTreeMap<String, DivisorClass> = BTreeMap::new();
    let put = |label: &str, coords: Vec<Rational>, classes: &mut BTreeMap<String, DivisorClass>| {
        classes.insert(label.to_string(), DivisorClass { label: label.to_string(), coords });
    };
    for (i, l) in lambda_basis_labels().iter().enumerate() {
        let mut e = zero();
        e[i] = int(1);
        put(l, e, &mut classes);
    }
    for (l, v) in glue_vectors() {
        put(&l, v, &mut classes);
    }
    let ac23 = alpha(&classes["C23"].coords);
    put("alpha(C23)", ac23, &mut classes);

    put("e1", pencil(1, &[(-1, "E12"), (-1, "E46")]), &mut classes);
    put("e2", pencil(2, &[(-1, "E12"), (-1, "E13"), (-1, "E24"), (-1, "E46"), (-1, "E56")]), &mut classes);
    put(
        "e3",
        pencil(3, &[(-2, "E12"), (-1, "E13"), (-1, "E24"), (-1, "E36"), (-1, "E45"), (-1, "E46"), (-1, "E56")]),
        &mut classes,
    );
    put(
        "e4",
        pencil(
            4,
            &[(-2, "E12"), (-2, "E13"), (-2, "E46"), (-1, "E24"), (-1, "E25"), (-1, "E36"), (-1, "E45"), (-1, "E56")],
        ),
        &mut classes,
    );
    put(
        "e5",
        pencil(
            5,
            &[
                (-3, "E12"),
                (-2, "E13"),
                (-2, "E46"),
                (-2, "E56"),
                (-1, "E24"),
                (-1, "E25"),
                (-1, "E34"),
                (-1, "E36"),
                (-1, "E45"),
            ],
        ),
        &mut classes,
    );
    put("e6", combo(&[(1, "E35")], &classes), &mut classes);

    let fiber_from_diagram = combo(
        &[
            (1, "C23"),
            (1, "alpha(C23)"),
            (2, "E23"),
            (2, "C12"),
            (2, "E26"),
            (2, "C16"),
            (2, "E16"),
            (2, "C0"),
            (1, "E15"),
            (1, "E14"),
        ],
        &classes,
    );
    let fiber_displayed = pencil(
        5,
        &[(-3, "E12"), (-2, "E13"), (-2, "E46"), (-2, "E56"), (-1, "E24"), (-1, "E25"), (-1, "E36"), (-1, "E45")],
    );

    let displayed_f: [(&str, Vec<Rational>); 5] = [
        (
            "f1",
            pencil(
                4,
                &[
                    (-2, "E12"),
                    (-2, "E13"),
                    (-2, "E56"),
                    (-1, "E24"),
                    (-1, "E25"),
                    (-1, "E36"),
                    (-1, "E45"),
                    (-1, "E46"),
                ],
            ),
        ),
        ("f2", pencil(3, &[(-2, "E12"), (-1, "E13"), (-1, "E25"), (-1, "E36"), (-1, "E45"), (-1, "E46"), (-1, "E56")])),
        ("f3", pencil(2, &[(-1, "E12"), (-1, "E13"), (-1, "E25"), (-1, "E46"), (-1, "E56")])),
        ("f4", pencil(1, &[(-1, "E12"), (-1, "E56")])),
        ("f5", combo(&[(1, "E34")], &BTreeMap::new())),
    ];
    for (l, v) in displayed_f.iter() {
        put(l, v.clone(), &mut classes);
    }
    let f6: Vec<Rational> = fiber_from_diagram.iter().zip(&classes["E35"].coords).map(|(a, b)| a - b).collect();
    put("f6", f6, &mut classes);

    let fiber = DivisorClass { label: "F".into(), coords: fiber_from_diagram.clone() };
    let q_labels: Vec<(String, String)> =
        Q_LABELS.iter().enumerate().map(|(k, l)| (format!("Q{}", k + 1), l.to_string())).collect();
    let nc = NarukiClasses { classes, fiber, q_labels };

    let pair = |a: &str, b: &str| ambient.pairing(nc.get(a), nc.get(b));
    let mut checks = Vec::new();

    // norms
    let bad_norms: Vec<String> = Q_LABELS
        .iter()
        .filter_map(|l| {
            let n = pair(l, l);
            (n != int(-2)).then(|| format!("{l}^2 = {}", qfmt(&n)))
        })
        .collect();
    let f2 = pair("F", "F");
    let mut norm_detail = bad_norms.clone();
    if !is_zero(&f2) {
        norm_detail.push(format!("F^2 = {}", qfmt(&f2)));
    }
    checks.push(CheckItem::new(
        "norms",
        norm_detail.is_empty(),
        if norm_detail.is_empty() { "24 classes of norm -2, F^2 = 0".to_string() } else { norm_detail.join(", ") },
    ));

    // diagram
    let expected = expected_diagram();
    let mut mismatches = Vec::new();
    let mut gram = vec![vec![String::new(); 24]; 24];
    for a in 0..24 {
        for b in 0..24 {
            let p = pair(Q_LABELS[a], Q_LABELS[b]);
            gram[a][b] = qfmt(&p);
            if b >= a && p != int(expected[a][b]) {
                mismatches.push(PairMismatch {
                    first: format!("Q{} = {}", a + 1, Q_LABELS[a]),
                    second: format!("Q{} = {}", b + 1, Q_LABELS[b]),
                    expected: expected[a][b].to_string(),
                    computed: qfmt(&p),
                });
            }
        }
    }
    checks.push(CheckItem::new(
        "diagram",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "Gram of Q1..Q24 matches the fibration diagram".to_string()
        } else {
            format!("{} mismatched pairs", mismatches.len())
        },
    ));

    // fiber sums
    let bad_sums: Vec<String> = (1..=6)
        .filter_map(|i| {
            let e = nc.get(&format!("e{i}"));
            let f = nc.get(&format!("f{i}"));
            let s: Vec<Rational> = e.iter().zip(f).map(|(a, b)| a + b).collect();
            (s != nc.fiber.coords).then(|| format!("e{i} + f{i} != F"))
        })
        .collect();
    checks.push(CheckItem::new(
        "fiber sums",
        bad_sums.is_empty(),
        if bad_sums.is_empty() { "e_i + f_i = F".into() } else { bad_sums.join(", ") },
    ));

    // F written two ways
    let same_fiber = fiber_from_diagram == fiber_displayed;
    checks.push(CheckItem::new(
        "fiber class",
        same_fiber,
        format!("F = {}", DivisorClass { label: "F".into(), coords: fiber_displayed }),
    ));

    // E8 copy
    let e8_edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let target = dynkin_gram(8, &e8_edges).scale(&int(-1));
    let mut copy = QMatrix::zeros(8, 8);
    for a in 0..8 {
        for b in 0..8 {
            copy[(a, b)] = pair(E8_COPY[a], E8_COPY[b]);
        }
    }
    let copy_ok = copy == target;
    checks.push(CheckItem::new(
        "E8 copy",
        copy_ok,
        if copy_ok { format!("Gram equals E8(-1), det {}", qfmt(&copy.det())) } else { format!("Gram:\n{copy}") },
    ));

    // octet
    let mut octet_bad = Vec::new();
    for (a, la) in OCTET.iter().enumerate() {
        for lb in OCTET.iter().skip(a) {
            let p = pair(la, lb);
            let want = if la == lb { int(-2) } else { int(0) };
            if p != want {
                octet_bad.push(format!("{la}.{lb} = {}", qfmt(&p)));
            }
        }
        for lb in E8_COPY {
            let p = pair(la, lb);
            if !is_zero(&p) {
                octet_bad.push(format!("{la}.{lb} = {}", qfmt(&p)));
            }
        }
    }
    checks.push(CheckItem::new(
        "octet",
        octet_bad.is_empty(),
        if octet_bad.is_empty() {
            "eight disjoint roots orthogonal to the E8 copy".into()
        } else {
            octet_bad.join(", ")
        },
    ));

    // alpha
    let am = alpha_matrix();
    let isometry = am.mul(&ambient.gram).mul(&am.transpose()) == ambient.gram;
    let involution = am.mul(&am) == QMatrix::identity(17);
    let shift = combo(&[(1, "C23"), (1, "L"), (-2, "E0")], &nc.classes);
    let ac_ok = shift.as_slice() == nc.get("alpha(C23)");
    let preserves = glue_vectors().iter().all(|(_, v)| lam.extension.contains(&alpha(v)));
    checks.push(CheckItem::new(
        "alpha",
        isometry && involution && ac_ok && preserves,
        format!("isometry {isometry}, order two {involution}, alpha(C23) = C23 + L - 2E0 {ac_ok}, preserves lattice {preserves}"),
    ));

    // membership
    let outside: Vec<String> = Q_LABELS
        .iter()
        .chain(std::iter::once(&"F"))
        .filter(|l| !lam.extension.contains(nc.get(l)))
        .map(|l| l.to_string())
        .collect();
    checks.push(CheckItem::new(
        "membership",
        outside.is_empty(),
        if outside.is_empty() {
            "all classes lie in Lambda(16,6)".into()
        } else {
            format!("outside: {}", outside.join(", "))
        },
    ));

    Ok((nc, NarukiReport { checks, mismatches, gram }))
}
