//! Truth-value snapshots and the five matrices.
//!
//! A snapshot packs the truth bits of a formula and its modal images:
//! `(z1,z2)` reads "z1 is the truth of A, z2 the truth of #A"; bimodal
//! snapshots `(z1,z2,z3)` add the truth of `#2 A`. Designated values are
//! those with `z1 = 1`. Multioperations map argument snapshots to the set of
//! admissible result snapshots; `(b,*)` denotes the full fiber over first
//! coordinate `b` intersected with the matrix's value set.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::ModalIndex;

#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Snapshot {
    arity: u8,
    bits: u8, // bit k holds coordinate k+1
}

impl Snapshot {
    pub fn pair(z1: bool, z2: bool) -> Snapshot {
        Snapshot {
            arity: 2,
            bits: (z1 as u8) | ((z2 as u8) << 1),
        }
    }

    pub fn triple(z1: bool, z2: bool, z3: bool) -> Snapshot {
        Snapshot {
            arity: 3,
            bits: (z1 as u8) | ((z2 as u8) << 1) | ((z3 as u8) << 2),
        }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn coord(&self, k: u8) -> bool {
        debug_assert!(k < self.arity);
        self.bits & (1 << k) != 0
    }

    /// z1: the truth of the formula itself.
    pub fn truth(&self) -> bool {
        self.coord(0)
    }

    /// z2: the truth of `#A` (`#1 A` in the bimodal signature).
    pub fn modal1(&self) -> bool {
        self.coord(1)
    }

    /// z3: the truth of `#2 A`. Only meaningful for bimodal snapshots.
    pub fn modal2(&self) -> bool {
        self.coord(2)
    }

    pub fn is_designated(&self) -> bool {
        self.truth()
    }

    fn sort_key(&self) -> (u8, bool, bool, bool) {
        (
            self.arity,
            self.truth(),
            self.modal1(),
            self.arity > 2 && self.modal2(),
        )
    }
}

impl PartialOrd for Snapshot {
    fn partial_cmp(&self, other: &Snapshot) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Snapshot {
    fn cmp(&self, other: &Snapshot) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for k in 0..self.arity {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.coord(k) as u8)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Snapshot {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.arity as usize))?;
        for k in 0..self.arity {
            seq.serialize_element(&(self.coord(k) as u8))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Snapshot {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Snapshot, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Snapshot;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an array of 2 or 3 bits")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Snapshot, A::Error> {
                let mut bits = Vec::new();
                while let Some(b) = seq.next_element::<u8>()? {
                    if b > 1 {
                        return Err(de::Error::custom("snapshot coordinates must be 0 or 1"));
                    }
                    bits.push(b == 1);
                }
                match bits.len() {
                    2 => Ok(Snapshot::pair(bits[0], bits[1])),
                    3 => Ok(Snapshot::triple(bits[0], bits[1], bits[2])),
                    n => Err(de::Error::custom(format!("snapshot needs 2 or 3 bits, got {n}"))),
                }
            }
        }
        deserializer.deserialize_seq(V)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SystemName {
    M,
    Mk,
    Mkt,
    Mkt4,
    M2,
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SystemName::M => "M",
            SystemName::Mk => "MK",
            SystemName::Mkt => "MKT",
            SystemName::Mkt4 => "MKT4",
            SystemName::M2 => "M2",
        };
        write!(f, "{s}")
    }
}

impl FromStr for SystemName {
    type Err = Error;
    fn from_str(s: &str) -> Result<SystemName> {
        match s.to_ascii_uppercase().as_str() {
            "M" => Ok(SystemName::M),
            "MK" => Ok(SystemName::Mk),
            "MKT" => Ok(SystemName::Mkt),
            "MKT4" => Ok(SystemName::Mkt4),
            "M2" => Ok(SystemName::M2),
            _ => Err(Error::UnknownSystem(s.to_string())),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    Neg,
    Imp,
    Mod(ModalIndex),
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Connective::Neg => "~",
            Connective::Imp => "->",
            Connective::Mod(ModalIndex::One) => "#",
            Connective::Mod(ModalIndex::Two) => "#2",
        };
        write!(f, "{s}")
    }
}

/// A fully materialized matrix: value set, designated set and one cell (a
/// non-empty sorted list of snapshots) per connective and argument tuple.
#[derive(Clone, Debug)]
pub struct MatrixSpec {
    name: SystemName,
    arity: u8,
    values: Vec<Snapshot>, // ascending
    idx: HashMap<Snapshot, usize>,
    neg: Vec<Vec<Snapshot>>,
    imp: Vec<Vec<Vec<Snapshot>>>,
    mod1: Vec<Vec<Snapshot>>,
    mod2: Option<Vec<Vec<Snapshot>>>,
}

/// All pair snapshots, ascending.
fn v4() -> Vec<Snapshot> {
    let mut v: Vec<Snapshot> = (0..4)
        .map(|b| Snapshot::pair(b & 1 != 0, b & 2 != 0))
        .collect();
    v.sort();
    v
}

/// Pair snapshots with z1 >= z2, ascending: the value set of MKT and MKT4.
fn v3() -> Vec<Snapshot> {
    v4().into_iter().filter(|z| z.truth() || !z.modal1()).collect()
}

/// All triple snapshots, ascending.
fn v8() -> Vec<Snapshot> {
    let mut v: Vec<Snapshot> = (0..8)
        .map(|b| Snapshot::triple(b & 1 != 0, b & 2 != 0, b & 4 != 0))
        .collect();
    v.sort();
    v
}

/// Values listed in the row/column order the tables are printed in:
/// descending, so (1,1) first.
fn paper_order(values: &[Snapshot]) -> Vec<Snapshot> {
    let mut v = values.to_vec();
    v.reverse();
    v
}

/// The full fiber over first coordinate `b`, cut down to `values`.
fn fiber(b: bool, values: &[Snapshot]) -> Vec<Snapshot> {
    values.iter().copied().filter(|z| z.truth() == b).collect()
}

/// Decodes a cell literal: `"1*"` is the fiber over 1, `"10"` the exact
/// snapshot (1,0). Cells are written in the same shorthand the tables use.
fn cell(code: &str, values: &[Snapshot]) -> Vec<Snapshot> {
    let chars: Vec<char> = code.chars().collect();
    assert_eq!(chars.len(), 2);
    let b = chars[0] == '1';
    match chars[1] {
        '*' => fiber(b, values),
        c => {
            let z = Snapshot::pair(b, c == '1');
            assert!(values.contains(&z), "cell {code} outside value set");
            vec![z]
        }
    }
}

/// Builds a unary table from cell literals given in paper (descending) row
/// order, returning it indexed by ascending value position.
fn unary_table(codes: &[&str], values: &[Snapshot]) -> Vec<Vec<Snapshot>> {
    let rows = paper_order(values);
    assert_eq!(codes.len(), rows.len());
    let mut table = vec![Vec::new(); values.len()];
    for (code, z) in codes.iter().zip(rows.iter()) {
        let i = values.iter().position(|v| v == z).unwrap();
        table[i] = cell(code, values);
    }
    table
}

/// Builds a binary table from row-major cell literals in paper order.
fn binary_table(codes: &[&str], values: &[Snapshot]) -> Vec<Vec<Vec<Snapshot>>> {
    let order = paper_order(values);
    let n = values.len();
    assert_eq!(codes.len(), n * n);
    let mut table = vec![vec![Vec::new(); n]; n];
    for (k, code) in codes.iter().enumerate() {
        let row = &order[k / n];
        let col = &order[k % n];
        let i = values.iter().position(|v| v == row).unwrap();
        let j = values.iter().position(|v| v == col).unwrap();
        table[i][j] = cell(code, values);
    }
    table
}

pub fn matrix_for(name: SystemName) -> MatrixSpec {
    match name {
        SystemName::M => {
            let values = v4();
            let imp_rows = [
                "1*", "1*", "0*", "0*", //
                "1*", "1*", "0*", "0*", //
                "1*", "1*", "1*", "1*", //
                "1*", "1*", "1*", "1*",
            ];
            MatrixSpec {
                name,
                arity: 2,
                idx: index_of(&values),
                neg: unary_table(&["0*", "0*", "1*", "1*"], &values),
                mod1: unary_table(&["1*", "0*", "1*", "0*"], &values),
                imp: binary_table(&imp_rows, &values),
                mod2: None,
                values,
            }
        }
        SystemName::Mk => {
            let values = v4();
            let imp_rows = [
                "1*", "10", "0*", "00", //
                "1*", "1*", "0*", "0*", //
                "1*", "10", "1*", "10", //
                "1*", "1*", "1*", "1*",
            ];
            MatrixSpec {
                name,
                arity: 2,
                idx: index_of(&values),
                neg: unary_table(&["0*", "0*", "1*", "1*"], &values),
                mod1: unary_table(&["1*", "0*", "1*", "0*"], &values),
                imp: binary_table(&imp_rows, &values),
                mod2: None,
                values,
            }
        }
        SystemName::Mkt => {
            let values = v3();
            let imp_rows = [
                "1*", "10", "00", //
                "1*", "1*", "0*", //
                "1*", "1*", "1*",
            ];
            MatrixSpec {
                name,
                arity: 2,
                idx: index_of(&values),
                neg: unary_table(&["0*", "0*", "1*"], &values),
                mod1: unary_table(&["1*", "0*", "0*"], &values),
                imp: binary_table(&imp_rows, &values),
                mod2: None,
                values,
            }
        }
        SystemName::Mkt4 => {
            let values = v3();
            let imp_rows = [
                "1*", "10", "00", //
                "1*", "1*", "0*", //
                "1*", "1*", "1*",
            ];
            MatrixSpec {
                name,
                arity: 2,
                idx: index_of(&values),
                neg: unary_table(&["0*", "0*", "1*"], &values),
                mod1: unary_table(&["11", "0*", "0*"], &values),
                imp: binary_table(&imp_rows, &values),
                mod2: None,
                values,
            }
        }
        SystemName::M2 => {
            let values = v8();
            // Every cell is the full fiber over the computed first
            // coordinate: ~ reads the complement of z1, -> the material
            // implication of the z1s, #1 reads z2 and #2 reads z3.
            let neg = values.iter().map(|z| fiber(!z.truth(), &values)).collect();
            let mod1 = values.iter().map(|z| fiber(z.modal1(), &values)).collect();
            let mod2 = values.iter().map(|z| fiber(z.modal2(), &values)).collect();
            let imp = values
                .iter()
                .map(|z| {
                    values
                        .iter()
                        .map(|w| fiber(!z.truth() || w.truth(), &values))
                        .collect()
                })
                .collect();
            MatrixSpec {
                name,
                arity: 3,
                idx: index_of(&values),
                neg,
                mod1,
                imp,
                mod2: Some(mod2),
                values,
            }
        }
    }
}

fn index_of(values: &[Snapshot]) -> HashMap<Snapshot, usize> {
    values.iter().enumerate().map(|(i, z)| (*z, i)).collect()
}

impl MatrixSpec {
    pub fn name(&self) -> SystemName {
        self.name
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn is_bimodal(&self) -> bool {
        self.arity == 3
    }

    /// Value set in ascending order (the enumeration order).
    pub fn values(&self) -> &[Snapshot] {
        &self.values
    }

    pub fn designated(&self) -> Vec<Snapshot> {
        self.values.iter().copied().filter(|z| z.is_designated()).collect()
    }

    pub fn contains(&self, z: Snapshot) -> bool {
        self.idx.contains_key(&z)
    }

    fn value_index(&self, z: Snapshot) -> Result<usize> {
        self.idx.get(&z).copied().ok_or_else(|| Error::ValueOutsideMatrix {
            system: self.name.to_string(),
            value: z.to_string(),
        })
    }

    /// The cell for one connective application. Results are ascending and
    /// never empty.
    pub fn apply_multiop(&self, conn: Connective, args: &[Snapshot]) -> Result<&[Snapshot]> {
        let want = if conn == Connective::Imp { 2 } else { 1 };
        if args.len() != want {
            return Err(Error::DomainMismatch(format!(
                "`{conn}` takes {want} argument(s), got {}",
                args.len()
            )));
        }
        match conn {
            Connective::Neg => Ok(&self.neg[self.value_index(args[0])?]),
            Connective::Mod(ModalIndex::One) => Ok(&self.mod1[self.value_index(args[0])?]),
            Connective::Mod(ModalIndex::Two) => match &self.mod2 {
                Some(t) => Ok(&t[self.value_index(args[0])?]),
                None => Err(Error::SignatureMismatch {
                    context: format!("apply_multiop on {}", self.name),
                }),
            },
            Connective::Imp => {
                Ok(&self.imp[self.value_index(args[0])?][self.value_index(args[1])?])
            }
        }
    }

    fn render_cell(&self, cell: &[Snapshot]) -> String {
        if !cell.is_empty() {
            let b = cell[0].truth();
            if *cell == fiber(b, &self.values) {
                let stars = if self.arity == 3 { "*,*" } else { "*" };
                return format!("({},{stars})", b as u8);
            }
        }
        let parts: Vec<String> = paper_order(cell).iter().map(|z| z.to_string()).collect();
        parts.join("/")
    }

    /// Text rendering in the row/column order the tables are printed in:
    /// (1,1) first, full fibers abbreviated `(b,*)`.
    pub fn render_table(&self) -> String {
        let order = paper_order(&self.values);
        let width = if self.arity == 3 { 7 } else { 5 };
        let mut out = String::new();
        out.push_str(&format!("system {}\n", self.name));
        out.push_str(&format!(
            "values: {}\n",
            order.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(" ")
        ));
        out.push_str(&format!(
            "designated: {}\n",
            paper_order(&self.designated())
                .iter()
                .map(|z| z.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ));
        if self.arity == 3 {
            // transposed layout: one row per unary connective, 8 value columns
            let label_w = 4;
            out.push('\n');
            let header: Vec<String> = order
                .iter()
                .map(|z| format!("{:>width$}", z.to_string()))
                .collect();
            out.push_str(&format!("{:>label_w$} | {}\n", "A", header.join(" ")));
            for (label, table) in [
                ("~A", &self.neg),
                ("#1A", &self.mod1),
                ("#2A", self.mod2.as_ref().unwrap()),
            ] {
                let row: Vec<String> = order
                    .iter()
                    .map(|z| format!("{:>width$}", self.render_cell(&table[self.idx[z]])))
                    .collect();
                out.push_str(&format!("{label:>label_w$} | {}\n", row.join(" ")));
            }
        } else {
            out.push('\n');
            out.push_str(&format!("{:>width$} | {:>width$} {:>width$}\n", "A", "~A", "#A"));
            for z in &order {
                let i = self.idx[z];
                out.push_str(&format!(
                    "{:>width$} | {:>width$} {:>width$}\n",
                    z.to_string(),
                    self.render_cell(&self.neg[i]),
                    self.render_cell(&self.mod1[i]),
                ));
            }
        }
        out.push('\n');
        let header: Vec<String> = order
            .iter()
            .map(|z| format!("{:>width$}", z.to_string()))
            .collect();
        out.push_str(&format!("{:>width$} | {}\n", "->", header.join(" ")));
        for z in &order {
            let i = self.idx[z];
            let row: Vec<String> = order
                .iter()
                .map(|w| format!("{:>width$}", self.render_cell(&self.imp[i][self.idx[w]])))
                .collect();
            out.push_str(&format!("{:>width$} | {}\n", z.to_string(), row.join(" ")));
        }
        out
    }

    /// JSON form: every cell as a mapping from argument snapshot(s) to the
    /// list of admissible results.
    pub fn to_json(&self) -> serde_json::Value {
        let order = paper_order(&self.values);
        let unary = |table: &Vec<Vec<Snapshot>>| -> serde_json::Value {
            let mut map = serde_json::Map::new();
            for z in &order {
                map.insert(
                    z.to_string(),
                    serde_json::to_value(&table[self.idx[z]]).unwrap(),
                );
            }
            serde_json::Value::Object(map)
        };
        let mut imp = serde_json::Map::new();
        for z in &order {
            for w in &order {
                imp.insert(
                    format!("{z} -> {w}"),
                    serde_json::to_value(&self.imp[self.idx[z]][self.idx[w]]).unwrap(),
                );
            }
        }
        let mut root = serde_json::Map::new();
        root.insert("system".into(), self.name.to_string().into());
        root.insert("arity".into(), (self.arity as u64).into());
        root.insert("values".into(), serde_json::to_value(&order).unwrap());
        root.insert(
            "designated".into(),
            serde_json::to_value(paper_order(&self.designated())).unwrap(),
        );
        root.insert("neg".into(), unary(&self.neg));
        root.insert("mod1".into(), unary(&self.mod1));
        if let Some(m2) = &self.mod2 {
            root.insert("mod2".into(), unary(m2));
        }
        root.insert("imp".into(), serde_json::Value::Object(imp));
        serde_json::Value::Object(root)
    }
}
