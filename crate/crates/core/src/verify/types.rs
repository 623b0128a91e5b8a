//! Component typing for CBIP colorings.
//!
//! A bipartite component with sides `A`, `B` is of type `1[l]` when
//! `b(A) = [l-2]` and `b(B) = [l-1]`, and of type `2[l]` when
//! `b(A) = [l-2] + {l}` and `b(B) = [l-1]`. A lone vertex is type `1[2]`
//! with an empty `A` side. Under a `kappa`-components-bounded presentation
//! every CBIP component has such a type with `l <= 2 kappa`, and the type of
//! a component after an arrival is fixed by the tables encoded in
//! [`check_type_transition`].

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::algorithms::Bin;
use crate::graph::{ComponentTracker, GraphError, OnlineGraph, PresentationStep, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeKind {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub kind: TypeKind,
    pub ell: u32,
}

impl TypeLabel {
    pub fn one(ell: u32) -> Self {
        Self {
            kind: TypeKind::One,
            ell,
        }
    }

    pub fn two(ell: u32) -> Self {
        Self {
            kind: TypeKind::Two,
            ell,
        }
    }

    /// Bin sets `(b(A), b(B))` this label prescribes.
    pub fn side_bins(self) -> (BTreeSet<u32>, BTreeSet<u32>) {
        let mut a: BTreeSet<u32> = (1..=self.ell.saturating_sub(2)).collect();
        if self.kind == TypeKind::Two {
            a.insert(self.ell);
        }
        let b = (1..self.ell).collect();
        (a, b)
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            TypeKind::One => 1,
            TypeKind::Two => 2,
        };
        write!(f, "Type {k}[{}]", self.ell)
    }
}

/// A typed component with its witness partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentType {
    pub label: TypeLabel,
    pub a_side: Vec<VertexId>,
    pub b_side: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentClass {
    Typed(ComponentType),
    Untypeable {
        sides: (Vec<VertexId>, Vec<VertexId>),
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("component containing {0} is not bipartite")]
    NotBipartite(VertexId),
    #[error("expected {expected} bins, got {got}")]
    BinCount { expected: usize, got: usize },
}

/// Length `k` if `set == {1..k}`.
fn prefix_len(set: &BTreeSet<u32>) -> Option<u32> {
    let k = set.len() as u32;
    (set.iter().next_back().copied().unwrap_or(0) == k).then_some(k)
}

/// Types a component from the bin sets of its two sides. Returns the label
/// and whether `x` is the `A` side.
pub fn classify_bin_sets(x: &BTreeSet<u32>, y: &BTreeSet<u32>) -> Option<(TypeLabel, bool)> {
    for (a, b, x_is_a) in [(x, y, true), (y, x, false)] {
        let Some(k) = prefix_len(b).filter(|&k| k >= 1) else {
            continue;
        };
        let ell = k + 1;
        for label in [TypeLabel::one(ell), TypeLabel::two(ell)] {
            if label.side_bins().0 == *a {
                return Some((label, x_is_a));
            }
        }
    }
    None
}

/// Types every component of a CBIP-colored bipartite graph, in order of
/// each component's lowest vertex.
pub fn classify_components(
    graph: &OnlineGraph,
    bins: &[Bin],
) -> Result<Vec<ComponentClass>, ClassifyError> {
    if bins.len() != graph.len() {
        return Err(ClassifyError::BinCount {
            expected: graph.len(),
            got: bins.len(),
        });
    }
    let n = graph.len();
    let mut side: Vec<Option<bool>> = vec![None; n];
    let mut out = Vec::new();
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut members = [Vec::new(), Vec::new()];
        let mut queue = VecDeque::from([VertexId(start)]);
        while let Some(u) = queue.pop_front() {
            let su = side[u.0].expect("queued vertices have a side");
            members[usize::from(su)].push(u);
            for &w in graph.neighbors(u) {
                match side[w.0] {
                    None => {
                        side[w.0] = Some(!su);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => return Err(ClassifyError::NotBipartite(u)),
                    Some(_) => {}
                }
            }
        }
        let [mut x, mut y] = members;
        x.sort_unstable();
        y.sort_unstable();
        let bins_of = |vs: &[VertexId]| vs.iter().map(|v| bins[v.0].0).collect::<BTreeSet<_>>();
        out.push(match classify_bin_sets(&bins_of(&x), &bins_of(&y)) {
            Some((label, true)) => ComponentClass::Typed(ComponentType {
                label,
                a_side: x,
                b_side: y,
            }),
            Some((label, false)) => ComponentClass::Typed(ComponentType {
                label,
                a_side: y,
                b_side: x,
            }),
            None => ComponentClass::Untypeable { sides: (x, y) },
        });
    }
    Ok(out)
}

/// Which block of a component the arriving vertex is adjacent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergedPart {
    pub label: TypeLabel,
    pub hit: Side,
}

/// One arrival as seen by the typing argument: the components the vertex
/// touches (none, one, or several), its bin, and the resulting type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalEvent {
    pub parts: Vec<MergedPart>,
    pub bin: Bin,
    pub after: TypeLabel,
}

/// The four bin-set shapes a merged side can take, relative to the type
/// parameter `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetShape {
    /// `[m-2]`
    Short,
    /// `[m-1]`
    Full,
    /// `[m-2] + {m}`
    Gapped,
    /// `[m]`
    Over,
}

impl SetShape {
    fn of(set: &BTreeSet<u32>, m: u32) -> Option<Self> {
        let upto = |k: u32| -> BTreeSet<u32> { (1..=k).collect() };
        let mut gapped = upto(m - 2);
        gapped.insert(m);
        if *set == upto(m - 2) {
            Some(SetShape::Short)
        } else if *set == upto(m - 1) {
            Some(SetShape::Full)
        } else if *set == gapped {
            Some(SetShape::Gapped)
        } else if *set == upto(m) {
            Some(SetShape::Over)
        } else {
            None
        }
    }
}

/// Outcome of a merge row: `(bin - m, kind, ell - m)`, or `None` for rows
/// that cannot occur.
fn merge_row(opposite: SetShape, same: SetShape) -> Option<(i64, TypeKind, i64)> {
    use SetShape::*;
    use TypeKind::*;
    match (opposite, same) {
        (Short, Short) | (Short, Full) => Some((-1, One, 0)),
        (Full, Short) | (Full, Gapped) => Some((0, Two, 0)),
        (Full, Full) | (Full, Over) => Some((0, One, 1)),
        (Gapped, Full) => Some((-1, Two, 0)),
        (Over, Full) => Some((1, Two, 1)),
        (Over, Over) => Some((1, One, 2)),
        _ => None,
    }
}

/// The table row an arrival matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionRow {
    Isolated,
    Extend {
        from: TypeLabel,
        hit: Side,
    },
    Merge {
        m: u32,
        opposite: SetShape,
        same: SetShape,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableViolation {
    #[error("merge with S_-v={opposite:?}, S_v={same:?} (m={m}) is marked impossible")]
    ImpossibleRow {
        m: u32,
        opposite: SetShape,
        same: SetShape,
    },
    #[error("merged sides {opposite:?} / {same:?} do not fit any row for m={m}")]
    UnrecognizedSides {
        m: u32,
        opposite: Vec<u32>,
        same: Vec<u32>,
    },
    #[error("vertex got bin {got}, table expects {expected}")]
    WrongBin { expected: u32, got: u32 },
    #[error("component became {got}, table expects {expected}")]
    WrongType { expected: TypeLabel, got: TypeLabel },
}

/// Checks one arrival against the extension table (one component touched)
/// or the merge table (several components touched).
pub fn check_type_transition(event: &ArrivalEvent) -> Result<TransitionRow, TableViolation> {
    let expect = |row: TransitionRow, bin: u32, after: TypeLabel| {
        if event.bin.0 != bin {
            Err(TableViolation::WrongBin {
                expected: bin,
                got: event.bin.0,
            })
        } else if event.after != after {
            Err(TableViolation::WrongType {
                expected: after,
                got: event.after,
            })
        } else {
            Ok(row)
        }
    };
    match event.parts.as_slice() {
        [] => expect(TransitionRow::Isolated, 1, TypeLabel::one(2)),
        [part] => {
            let ell = part.label.ell;
            let row = TransitionRow::Extend {
                from: part.label,
                hit: part.hit,
            };
            match (part.label.kind, part.hit) {
                (kind, Side::A) => expect(row, ell - 1, TypeLabel { kind, ell }),
                (_, Side::B) => expect(row, ell, TypeLabel::two(ell)),
            }
        }
        parts => {
            let m = parts.iter().map(|p| p.label.ell).max().expect("non-empty");
            let mut opposite = BTreeSet::new();
            let mut same = BTreeSet::new();
            for p in parts {
                let (a, b) = p.label.side_bins();
                let (hit, other) = match p.hit {
                    Side::A => (a, b),
                    Side::B => (b, a),
                };
                opposite.extend(hit);
                same.extend(other);
            }
            let (Some(o), Some(s)) = (SetShape::of(&opposite, m), SetShape::of(&same, m)) else {
                return Err(TableViolation::UnrecognizedSides {
                    m,
                    opposite: opposite.into_iter().collect(),
                    same: same.into_iter().collect(),
                });
            };
            let row = TransitionRow::Merge {
                m,
                opposite: o,
                same: s,
            };
            match merge_row(o, s) {
                None => Err(TableViolation::ImpossibleRow {
                    m,
                    opposite: o,
                    same: s,
                }),
                Some((bin_off, kind, ell_off)) => {
                    let bin = (i64::from(m) + bin_off) as u32;
                    let ell = (i64::from(m) + ell_off) as u32;
                    expect(row, bin, TypeLabel { kind, ell })
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContinuityViolation {
    #[error("type parameter jumped from {from} to {to}")]
    Jump { from: u32, to: u32 },
    #[error(
        "type parameter grew from {from} to {to} with only {high} merged components at >= m-1"
    )]
    Unsupported { from: u32, to: u32, high: usize },
}

/// The type parameter of the resulting component grows by at most 2, and
/// only when at least two merged components had parameter `>= m - 1`.
pub fn check_continuity(event: &ArrivalEvent) -> Result<(), ContinuityViolation> {
    let Some(m) = event.parts.iter().map(|p| p.label.ell).max() else {
        return Ok(());
    };
    let to = event.after.ell;
    if to < m || to > m + 2 {
        return Err(ContinuityViolation::Jump { from: m, to });
    }
    if to > m {
        let high = event.parts.iter().filter(|p| p.label.ell + 1 >= m).count();
        if high < 2 {
            return Err(ContinuityViolation::Unsupported { from: m, to, high });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeViolation {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("component of {0} is not bipartite")]
    NotBipartite(VertexId),
    #[error("component of {0} is untypeable")]
    Untypeable(VertexId),
    #[error("at {vertex}: {source}")]
    Table {
        vertex: VertexId,
        source: TableViolation,
    },
    #[error("at {vertex}: {source}")]
    Continuity {
        vertex: VertexId,
        source: ContinuityViolation,
    },
    #[error("at {vertex}: type parameter {ell} exceeds {bound}")]
    AboveBound {
        vertex: VertexId,
        ell: u32,
        bound: u32,
    },
    #[error("at {vertex}: {count} components have type parameter >= {threshold}")]
    SeveralHigh {
        vertex: VertexId,
        count: usize,
        threshold: u32,
    },
}

#[derive(Debug, Clone)]
struct Tracked {
    /// Bin sets indexed by parity relative to the component root.
    sides: [BTreeSet<u32>; 2],
    label: TypeLabel,
    a_parity: bool,
}

/// Follows a CBIP run arrival by arrival, re-typing only the component that
/// changed, and checks the typing invariants for a `kappa` bound.
#[derive(Debug, Clone)]
pub struct TypeMonitor {
    kappa: u32,
    tracker: ComponentTracker,
    components: HashMap<VertexId, Tracked>,
}

impl TypeMonitor {
    pub fn new(kappa: usize) -> Self {
        Self {
            kappa: kappa as u32,
            tracker: ComponentTracker::new(),
            components: HashMap::new(),
        }
    }

    /// Current labels, one per component.
    pub fn labels(&self) -> Vec<TypeLabel> {
        let mut labels: Vec<_> = self.components.values().map(|c| c.label).collect();
        labels.sort();
        labels
    }

    pub fn max_ell(&self) -> u32 {
        self.components
            .values()
            .map(|c| c.label.ell)
            .max()
            .unwrap_or(0)
    }

    pub fn observe(
        &mut self,
        step: &PresentationStep,
        bin: Bin,
    ) -> Result<ArrivalEvent, TypeViolation> {
        step.validate(self.tracker.len())?;
        let v = step.vertex;
        let mut hits: BTreeMap<VertexId, bool> = BTreeMap::new();
        for &u in &step.pre_neighborhood {
            let (root, parity) = self.tracker.find(u);
            if let Some(&seen) = hits.get(&root) {
                if seen != parity {
                    return Err(TypeViolation::NotBipartite(v));
                }
            }
            hits.insert(root, parity);
        }
        let parts: Vec<MergedPart> = hits
            .iter()
            .map(|(root, &parity)| {
                let c = &self.components[root];
                let hit = if parity == c.a_parity {
                    Side::A
                } else {
                    Side::B
                };
                MergedPart {
                    label: c.label,
                    hit,
                }
            })
            .collect();

        self.tracker.add_vertex(step)?;
        let (root, v_parity) = self.tracker.find(v);
        let mut sides = [BTreeSet::new(), BTreeSet::new()];
        for old_root in hits.keys() {
            let (_, shift) = self.tracker.find(*old_root);
            let old = self.components.remove(old_root).expect("tracked root");
            for (parity, bins) in old.sides.into_iter().enumerate() {
                sides[parity ^ usize::from(shift)].extend(bins);
            }
        }
        sides[usize::from(v_parity)].insert(bin.0);
        let (label, zero_is_a) =
            classify_bin_sets(&sides[0], &sides[1]).ok_or(TypeViolation::Untypeable(v))?;
        let event = ArrivalEvent {
            parts,
            bin,
            after: label,
        };
        check_type_transition(&event)
            .map_err(|source| TypeViolation::Table { vertex: v, source })?;
        check_continuity(&event)
            .map_err(|source| TypeViolation::Continuity { vertex: v, source })?;
        self.components.insert(
            root,
            Tracked {
                sides,
                label,
                a_parity: !zero_is_a,
            },
        );

        let bound = 2 * self.kappa;
        if label.ell > bound {
            return Err(TypeViolation::AboveBound {
                vertex: v,
                ell: label.ell,
                bound,
            });
        }
        let threshold = bound.saturating_sub(1);
        let count = self
            .components
            .values()
            .filter(|c| c.label.ell >= threshold)
            .count();
        if count > 1 {
            return Err(TypeViolation::SeveralHigh {
                vertex: v,
                count,
                threshold,
            });
        }
        Ok(event)
    }
}
