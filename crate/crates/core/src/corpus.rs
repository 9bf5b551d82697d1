//! Named candidate definitions with the native relation each should match.

use crate::formula::{parse, Signature};
use crate::interp::{Definition, SymbolKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// Structure the graph is evaluated in.
    pub structure: &'static str,
    /// Native relation of `structure` the graph should agree with.
    pub oracle: &'static str,
    pub definition: Definition,
}

struct Raw {
    name: &'static str,
    description: &'static str,
    structure: &'static str,
    oracle: &'static str,
    symbol: &'static str,
    params: &'static [&'static str],
    base: fn() -> Signature,
    graph: &'static str,
}

const RAW: &[Raw] = &[
    Raw {
        name: "succ_paper",
        description: "successor with the bounding clause quantifying above x instead of above y",
        structure: "natfull",
        oracle: "succ",
        symbol: "S",
        params: &["x", "y"],
        base: Signature::order,
        graph: "y < x & forall z. (x < z -> z = y or y < z)",
    },
    Raw {
        name: "succ_fixed",
        description: "successor: x is above y and nothing lies strictly between them",
        structure: "natfull",
        oracle: "succ",
        symbol: "S",
        params: &["x", "y"],
        base: Signature::order,
        graph: "y < x & forall z. (y < z -> z = x or x < z)",
    },
    Raw {
        name: "lemma1_exists",
        description: "zero as the values of y mod y",
        structure: "mod",
        oracle: "zero",
        symbol: "Zero",
        params: &["x"],
        base: Signature::modulo,
        graph: "exists y. y mod y = x",
    },
    Raw {
        name: "lemma2_full",
        description: "order on all of the naturals from mod alone",
        structure: "mod",
        oracle: "<",
        symbol: "Less",
        params: &["x", "y"],
        base: Signature::modulo,
        graph: "x mod x = x & not (y mod y = y) or not (x mod x = x) & not (y mod y = y) & x mod y = x",
    },
    Raw {
        name: "lemma3_full",
        description: "divisibility on all of the naturals from mod alone",
        structure: "mod",
        oracle: "divides",
        symbol: "Divides",
        params: &["y", "x"],
        base: Signature::modulo,
        graph: "x mod x = x or not (x mod x = x) & (x mod y) mod (x mod y) = x mod y",
    },
];

fn build(raw: &Raw) -> CorpusEntry {
    let base = (raw.base)();
    let graph = parse(raw.graph, &base).expect("corpus graph parses");
    let definition =
        Definition::new(raw.symbol, SymbolKind::Relation, raw.params, graph, base).expect("corpus entry is valid");
    CorpusEntry {
        name: raw.name,
        description: raw.description,
        structure: raw.structure,
        oracle: raw.oracle,
        definition,
    }
}

/// All entries in a fixed order.
pub fn entries() -> Vec<CorpusEntry> {
    RAW.iter().map(build).collect()
}

pub fn get(name: &str) -> Option<CorpusEntry> {
    RAW.iter().find(|r| r.name == name).map(build)
}
