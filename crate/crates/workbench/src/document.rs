//! The JSON document format: every structure kind is a tagged object with a
//! `kind` discriminator and `version: 1`. Subsets are ascending index
//! arrays, relations are pair arrays, and localization tables are keyed by
//! the canonical array rendering of the subset.
//!
//! Serialization is canonical and byte-deterministic: table keys sort as
//! strings and all arrays are emitted in ascending order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use ttslab_core::convergence::ConvergenceStructure;
use ttslab_core::derived_topology::Topology;
use ttslab_core::foundations::{BitSet, Carrier, PrincipalFilter, Rel, Subset};
use ttslab_core::moore_smith::NetClass;
use ttslab_core::tts::{Tts, TtpAssignment, Ttsr};
use ttslab_core::uniform::{FiniteUniformity, UniformConvergence};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported document version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("semantic error: {0}")]
    Semantic(String),
}

fn semantic(msg: impl Into<String>) -> DocumentError {
    DocumentError::Semantic(msg.into())
}

/// A structure document. The `kind` tag selects the structure; bodies hold
/// plain integer arrays only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Document {
    #[serde(rename = "topology")]
    Topology { version: u32, carrier: usize, opens: Vec<Vec<usize>> },
    #[serde(rename = "convergence")]
    Convergence {
        version: u32,
        carrier: usize,
        /// Per point, the list of convergent filter cores.
        lambda: Vec<Vec<Vec<usize>>>,
    },
    #[serde(rename = "ucs")]
    Ucs { version: u32, carrier: usize, generators: Vec<Vec<(usize, usize)>> },
    #[serde(rename = "uniformity")]
    Uniformity { version: u32, carrier: usize, entourage: Vec<(usize, usize)> },
    #[serde(rename = "tts")]
    Tts {
        version: u32,
        carrier: usize,
        tokens: usize,
        #[serde(rename = "tokenNames", default, skip_serializing_if = "Option::is_none")]
        token_names: Option<Vec<String>>,
        t: BTreeMap<String, Vec<usize>>,
        xi: Vec<(usize, usize)>,
    },
    #[serde(rename = "ttsr")]
    Ttsr {
        version: u32,
        carrier: usize,
        tokens: usize,
        #[serde(rename = "tokenNames", default, skip_serializing_if = "Option::is_none")]
        token_names: Option<Vec<String>>,
        t: BTreeMap<String, Vec<usize>>,
        xi: Vec<(usize, usize)>,
        leq: Vec<(usize, usize)>,
    },
    #[serde(rename = "net-class")]
    NetClass { version: u32, carrier: usize, class: ClassRule },
}

/// Declarative net-convergence classes for the bounded checker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum ClassRule {
    #[serde(rename = "from-topology")]
    FromTopology { opens: Vec<Vec<usize>> },
    #[serde(rename = "from-convergence")]
    FromConvergence { lambda: Vec<Vec<Vec<usize>>> },
    /// Converges to `x` iff the index has at least `minIndex` elements and
    /// the net is eventually constant at `x`.
    #[serde(rename = "eventually-min-index")]
    EventuallyMinIndex {
        #[serde(rename = "minIndex")]
        min_index: usize,
    },
    /// Converges to `x` iff the net attains the value `x` somewhere.
    #[serde(rename = "attains-value")]
    AttainsValue {},
}

impl Document {
    pub fn version(&self) -> u32 {
        match self {
            Document::Topology { version, .. }
            | Document::Convergence { version, .. }
            | Document::Ucs { version, .. }
            | Document::Uniformity { version, .. }
            | Document::Tts { version, .. }
            | Document::Ttsr { version, .. }
            | Document::NetClass { version, .. } => *version,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Topology { .. } => "topology",
            Document::Convergence { .. } => "convergence",
            Document::Ucs { .. } => "ucs",
            Document::Uniformity { .. } => "uniformity",
            Document::Tts { .. } => "tts",
            Document::Ttsr { .. } => "ttsr",
            Document::NetClass { .. } => "net-class",
        }
    }
}

/// Parses a document, reporting JSON syntax errors with position and
/// rejecting unsupported versions. Structure-level validity is checked by
/// the conversion into the core types.
pub fn parse(text: &str) -> Result<Document, DocumentError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.version() != FORMAT_VERSION {
        return Err(DocumentError::Version(doc.version()));
    }
    Ok(doc)
}

/// Canonical serialization: pretty JSON with a trailing newline.
pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

fn render_subset_key(s: Subset) -> String {
    let members: Vec<String> = s.members().map(|x| x.to_string()).collect();
    format!("[{}]", members.join(","))
}

fn parse_subset_key(key: &str, carrier: Carrier) -> Result<Subset, DocumentError> {
    let inner = key
        .strip_prefix('[')
        .and_then(|k| k.strip_suffix(']'))
        .ok_or_else(|| semantic(format!("malformed subset key {key:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Subset::empty(carrier));
    }
    let members = inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| semantic(format!("malformed subset key {key:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Subset::from_members(carrier, members)
        .map_err(|e| semantic(format!("subset key {key:?}: {e}")))
}

fn carrier_of(size: usize) -> Result<Carrier, DocumentError> {
    Carrier::new(size).map_err(|e| semantic(e.to_string()))
}

fn subset_of(carrier: Carrier, members: &[usize]) -> Result<Subset, DocumentError> {
    Subset::from_members(carrier, members.iter().copied()).map_err(|e| semantic(e.to_string()))
}

fn rel_of(n: usize, pairs: &[(usize, usize)]) -> Result<Rel, DocumentError> {
    for &(x, y) in pairs {
        if x >= n || y >= n {
            return Err(semantic(format!("pair ({x},{y}) out of range for universe {n}")));
        }
    }
    Ok(Rel::from_pairs(n, pairs.iter().copied()))
}

pub fn topology_from_parts(carrier: usize, opens: &[Vec<usize>]) -> Result<Topology, DocumentError> {
    let c = carrier_of(carrier)?;
    let opens = opens
        .iter()
        .map(|o| subset_of(c, o))
        .collect::<Result<Vec<_>, _>>()?;
    Topology::new(c, opens).map_err(|e| semantic(e.to_string()))
}

pub fn convergence_from_parts(
    carrier: usize,
    lambda: &[Vec<Vec<usize>>],
) -> Result<ConvergenceStructure, DocumentError> {
    let c = carrier_of(carrier)?;
    if lambda.len() != c.size() {
        return Err(semantic(format!(
            "lambda has {} rows, expected one per point ({})",
            lambda.len(),
            c.size()
        )));
    }
    let filters = PrincipalFilter::count(c);
    let rows = lambda
        .iter()
        .map(|cores| {
            let mut set = BitSet::new(filters);
            for core in cores {
                let s = subset_of(c, core)?;
                let f = PrincipalFilter::new(s).map_err(|e| semantic(e.to_string()))?;
                set.insert(f.token_index());
            }
            Ok(set)
        })
        .collect::<Result<Vec<_>, DocumentError>>()?;
    ConvergenceStructure::new(c, rows).map_err(|e| semantic(e.to_string()))
}

pub fn ucs_from_parts(
    carrier: usize,
    generators: &[Vec<(usize, usize)>],
) -> Result<UniformConvergence, DocumentError> {
    let c = carrier_of(carrier)?;
    let gens = generators
        .iter()
        .map(|pairs| rel_of(c.size(), pairs))
        .collect::<Result<Vec<_>, _>>()?;
    UniformConvergence::new(c, gens).map_err(|e| semantic(e.to_string()))
}

pub fn uniformity_from_parts(
    carrier: usize,
    entourage: &[(usize, usize)],
) -> Result<FiniteUniformity, DocumentError> {
    let c = carrier_of(carrier)?;
    let rel = rel_of(c.size(), entourage)?;
    FiniteUniformity::new(c, rel).map_err(|e| semantic(e.to_string()))
}

pub fn tts_from_parts(
    carrier: usize,
    tokens: usize,
    t: &BTreeMap<String, Vec<usize>>,
    xi: &[(usize, usize)],
) -> Result<Tts, DocumentError> {
    let c = carrier_of(carrier)?;
    let mut table = vec![None; c.subset_count()];
    for (key, toks) in t {
        let subset = parse_subset_key(key, c)?;
        for &tok in toks {
            if tok >= tokens {
                return Err(semantic(format!("token {tok} out of range in T({key})")));
            }
        }
        table[subset.mask() as usize] = Some(BitSet::from_iter(tokens, toks.iter().copied()));
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(mask, row)| {
            row.ok_or_else(|| {
                let subset = Subset::from_mask(c, mask as u32);
                semantic(format!("incomplete T table: missing entry for {}", render_subset_key(subset)))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let support = TtpAssignment::new(c, tokens, table).map_err(|e| semantic(e.to_string()))?;
    let xi = rel_of(tokens, xi)?;
    Tts::new(support, xi).map_err(|e| semantic(e.to_string()))
}

pub fn ttsr_from_parts(
    carrier: usize,
    tokens: usize,
    t: &BTreeMap<String, Vec<usize>>,
    xi: &[(usize, usize)],
    leq: &[(usize, usize)],
) -> Result<Ttsr, DocumentError> {
    let tts = tts_from_parts(carrier, tokens, t, xi)?;
    let leq = rel_of(tokens, leq)?;
    Ttsr::new(tts, leq).map_err(|e| semantic(e.to_string()))
}

pub fn net_class_from_parts(carrier: usize, rule: &ClassRule) -> Result<NetClass, DocumentError> {
    let c = carrier_of(carrier)?;
    Ok(match rule {
        ClassRule::FromTopology { opens } => {
            NetClass::FromTopology(topology_from_parts(carrier, opens)?)
        }
        ClassRule::FromConvergence { lambda } => {
            NetClass::FromConvergence(convergence_from_parts(carrier, lambda)?)
        }
        ClassRule::EventuallyMinIndex { min_index } => {
            NetClass::EventuallyMinIndex { carrier: c, min_index: *min_index }
        }
        ClassRule::AttainsValue {} => NetClass::AttainsValue { carrier: c },
    })
}

pub fn topology_to_document(t: &Topology) -> Document {
    Document::Topology {
        version: FORMAT_VERSION,
        carrier: t.carrier().size(),
        opens: t.opens().map(|o| o.members().collect()).collect(),
    }
}

pub fn convergence_to_document(l: &ConvergenceStructure) -> Document {
    let c = l.carrier();
    Document::Convergence {
        version: FORMAT_VERSION,
        carrier: c.size(),
        lambda: c
            .elements()
            .map(|x| {
                l.at(x)
                    .iter()
                    .map(|t| PrincipalFilter::from_token_index(c, t).core().members().collect())
                    .collect()
            })
            .collect(),
    }
}

pub fn ucs_to_document(u: &UniformConvergence) -> Document {
    Document::Ucs {
        version: FORMAT_VERSION,
        carrier: u.carrier().size(),
        generators: u.generators().map(|r| r.pairs().collect()).collect(),
    }
}

pub fn uniformity_to_document(u: &FiniteUniformity) -> Document {
    Document::Uniformity {
        version: FORMAT_VERSION,
        carrier: u.carrier().size(),
        entourage: u.entourage().pairs().collect(),
    }
}

pub fn tts_to_document(sigma: &Tts) -> Document {
    Document::Tts {
        version: FORMAT_VERSION,
        carrier: sigma.carrier().size(),
        tokens: sigma.tokens(),
        token_names: None,
        t: sigma
            .support()
            .rows()
            .map(|(s, toks)| (render_subset_key(s), toks.iter().collect()))
            .collect(),
        xi: sigma.xi().pairs().collect(),
    }
}

pub fn ttsr_to_document(sigma: &Ttsr) -> Document {
    let base = sigma.base();
    Document::Ttsr {
        version: FORMAT_VERSION,
        carrier: base.carrier().size(),
        tokens: base.tokens(),
        token_names: None,
        t: base
            .support()
            .rows()
            .map(|(s, toks)| (render_subset_key(s), toks.iter().collect()))
            .collect(),
        xi: base.xi().pairs().collect(),
        leq: sigma.leq().pairs().collect(),
    }
}

/// A parsed structure of any supported kind.
#[derive(Debug, Clone)]
pub enum Structure {
    Topology(Topology),
    Convergence(ConvergenceStructure),
    Ucs(UniformConvergence),
    Uniformity(FiniteUniformity),
    Tts(Tts),
    Ttsr(Ttsr),
    NetClass(NetClass),
}

/// Converts a document into its core structure, applying structure-level
/// validation.
pub fn to_structure(doc: &Document) -> Result<Structure, DocumentError> {
    Ok(match doc {
        Document::Topology { carrier, opens, .. } => {
            Structure::Topology(topology_from_parts(*carrier, opens)?)
        }
        Document::Convergence { carrier, lambda, .. } => {
            Structure::Convergence(convergence_from_parts(*carrier, lambda)?)
        }
        Document::Ucs { carrier, generators, .. } => {
            Structure::Ucs(ucs_from_parts(*carrier, generators)?)
        }
        Document::Uniformity { carrier, entourage, .. } => {
            Structure::Uniformity(uniformity_from_parts(*carrier, entourage)?)
        }
        Document::Tts { carrier, tokens, t, xi, .. } => {
            Structure::Tts(tts_from_parts(*carrier, *tokens, t, xi)?)
        }
        Document::Ttsr { carrier, tokens, t, xi, leq, .. } => {
            Structure::Ttsr(ttsr_from_parts(*carrier, *tokens, t, xi, leq)?)
        }
        Document::NetClass { carrier, class, .. } => {
            Structure::NetClass(net_class_from_parts(*carrier, class)?)
        }
    })
}

/// Renders a structure back to its document.
pub fn from_structure(s: &Structure) -> Document {
    match s {
        Structure::Topology(t) => topology_to_document(t),
        Structure::Convergence(l) => convergence_to_document(l),
        Structure::Ucs(u) => ucs_to_document(u),
        Structure::Uniformity(u) => uniformity_to_document(u),
        Structure::Tts(t) => tts_to_document(t),
        Structure::Ttsr(t) => ttsr_to_document(t),
        Structure::NetClass(c) => {
            let rule = match c {
                NetClass::FromTopology(t) => ClassRule::FromTopology {
                    opens: t.opens().map(|o| o.members().collect()).collect(),
                },
                NetClass::FromConvergence(l) => {
                    match convergence_to_document(l) {
                        Document::Convergence { lambda, .. } => {
                            ClassRule::FromConvergence { lambda }
                        }
                        _ => unreachable!(),
                    }
                }
                NetClass::EventuallyMinIndex { min_index, .. } => {
                    ClassRule::EventuallyMinIndex { min_index: *min_index }
                }
                NetClass::AttainsValue { .. } => ClassRule::AttainsValue {},
            };
            Document::NetClass {
                version: FORMAT_VERSION,
                carrier: c.carrier().size(),
                class: rule,
            }
        }
    }
}
