//! Level Schreier graphs, balls in orbital graphs and rooted marked-graph
//! isomorphism.
//!
//! Balls are word-metric balls for an explicit generating set: the ball of
//! radius `r` at `x` holds the orbit points reachable from `x` in at most
//! `r` generator steps, together with every labeled edge between them.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grig::{act_boundary, act_vertex, BoundaryPoint, Gen, GroupWord, Vertex};
use crate::hecke::MAX_LEVEL;

/// A rooted directed graph whose edges carry generator labels.
///
/// Each label acts as a partial injection: a vertex has at most one
/// outgoing and at most one incoming edge per label. In level graphs the
/// action is a permutation, so both are exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraph {
    ids: Vec<String>,
    root: usize,
    labels: Vec<String>,
    out: Vec<Vec<Option<usize>>>,
    inc: Vec<Vec<Option<usize>>>,
}

impl MarkedGraph {
    fn with_vertices(ids: Vec<String>, root: usize, labels: Vec<String>) -> Self {
        let n = ids.len();
        let k = labels.len();
        MarkedGraph {
            ids,
            root,
            labels,
            out: vec![vec![None; n]; k],
            inc: vec![vec![None; n]; k],
        }
    }

    /// Adds `source -> target` under `label`; false if it clashes with an
    /// existing edge.
    fn add_edge(&mut self, source: usize, target: usize, label: usize) -> bool {
        match (self.out[label][source], self.inc[label][target]) {
            (None, None) => {
                self.out[label][source] = Some(target);
                self.inc[label][target] = Some(source);
                true
            }
            (Some(t), Some(s)) => t == target && s == source,
            _ => false,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Serialized payload of vertex `v`.
    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn label_edge_count(&self, label: usize) -> usize {
        self.out[label].iter().flatten().count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.labels.len()).map(|l| self.label_edge_count(l)).sum()
    }

    pub fn out(&self, v: usize, label: usize) -> Option<usize> {
        self.out[label][v]
    }

    pub fn incoming(&self, v: usize, label: usize) -> Option<usize> {
        self.inc[label][v]
    }

    /// `(source, target, label)` in vertex, then label order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.ids.len()).flat_map(move |v| {
            (0..self.labels.len()).filter_map(move |l| self.out[l][v].map(|t| (v, t, l)))
        })
    }

    /// Every label is a permutation of the vertex set.
    pub fn is_complete(&self) -> bool {
        self.out.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// `# root=<id>`, a `source,target,label` header, then one edge per row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# root={}", self.ids[self.root])?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["source", "target", "label"])?;
        for (s, t, l) in self.edges() {
            w.write_record([&self.ids[s], &self.ids[t], &self.labels[l]])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses the format of [`MarkedGraph::write_csv`]. Vertices are
    /// numbered root first, then in order of appearance as a source, then
    /// as a target; labels in order of appearance.
    pub fn read_csv<R: BufRead>(mut input: R) -> Result<Self> {
        let bad = |line: usize, reason: &str| Error::InvalidGraph {
            line,
            reason: reason.to_string(),
        };
        let mut first = String::new();
        input
            .read_line(&mut first)
            .map_err(|e| bad(1, &e.to_string()))?;
        let root_id = first
            .trim_end_matches(['\n', '\r'])
            .strip_prefix("# root=")
            .ok_or_else(|| bad(1, "expected '# root=<id>'"))?
            .to_string();

        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let headers = reader.headers().map_err(|e| bad(2, &e.to_string()))?;
        if headers != vec!["source", "target", "label"] {
            return Err(bad(2, "expected header 'source,target,label'"));
        }
        let mut ids = vec![root_id.clone()];
        let mut index: HashMap<String, usize> = HashMap::from([(root_id, 0)]);
        let mut labels: Vec<String> = Vec::new();
        let mut records = Vec::new();
        for (k, record) in reader.records().enumerate() {
            let line = k + 3;
            let record = record.map_err(|e| bad(line, &e.to_string()))?;
            if record.len() != 3 {
                return Err(bad(line, "expected three fields"));
            }
            if !labels.iter().any(|x| x == &record[2]) {
                labels.push(record[2].to_string());
            }
            records.push((line, record));
        }
        let mut vertex = |id: &str| {
            *index.entry(id.to_string()).or_insert_with(|| {
                ids.push(id.to_string());
                ids.len() - 1
            })
        };
        let sources: Vec<usize> = records.iter().map(|(_, r)| vertex(&r[0])).collect();
        let targets: Vec<usize> = records.iter().map(|(_, r)| vertex(&r[1])).collect();
        let mut g = MarkedGraph::with_vertices(ids, 0, labels);
        for (((line, record), s), t) in records.iter().zip(sources).zip(targets) {
            let l = g.label_index(&record[2]).expect("collected above");
            if !g.add_edge(s, t, l) {
                return Err(bad(*line, "label is not injective"));
            }
        }
        Ok(g)
    }
}

/// Schreier graph of the action on `V_n`, rooted at `0ⁿ`, with one labeled
/// edge per vertex and generator. Vertex `i` is `Vertex::from_index(i, n)`.
pub fn level_graph(n: usize, gens: &[GroupWord]) -> Result<MarkedGraph> {
    if n > MAX_LEVEL {
        return Err(Error::LevelTooLarge {
            level: n,
            max: MAX_LEVEL,
        });
    }
    let vertices: Vec<Vertex> = Vertex::level_set(n).collect();
    let ids = vertices.iter().map(Vertex::to_string).collect();
    let labels = label_names(gens);
    let mut g = MarkedGraph::with_vertices(ids, 0, labels);
    for (l, w) in gens.iter().enumerate() {
        for (i, v) in vertices.iter().enumerate() {
            let added = g.add_edge(i, act_vertex(w, v).index(), l);
            debug_assert!(added);
        }
    }
    Ok(g)
}

fn label_names(gens: &[GroupWord]) -> Vec<String> {
    gens.iter()
        .map(|w| if w.is_empty() { "e".to_string() } else { w.to_string() })
        .collect()
}

/// An orbit point, stored as the sorted positions where it differs from a
/// reference point of the same orbit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrbitPointKey(Vec<usize>);

impl OrbitPointKey {
    /// `None` when `point` is not cofinal with `reference`.
    pub fn new(reference: &BoundaryPoint, point: &BoundaryPoint) -> Option<Self> {
        reference.differences(point).map(OrbitPointKey)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    /// The point obtained by flipping `reference` at the key's positions.
    pub fn resolve(&self, reference: &BoundaryPoint) -> BoundaryPoint {
        let len = self.0.last().map_or(0, |&p| p + 1);
        let mut bits: Vec<u8> = (0..len).map(|i| reference.bit(i)).collect();
        for &p in &self.0 {
            bits[p] ^= 1;
        }
        let tail = reference.shift(len);
        let mut pre = bits;
        pre.extend_from_slice(tail.preperiod());
        BoundaryPoint::new(pre, tail.period().to_vec()).expect("canonical parts are valid")
    }
}

/// Word-metric ball of radius `r` at `x` in the orbital graph of `gens`.
///
/// Vertex 0 is `x`; vertices are numbered in breadth-first order with
/// generators tried in the given order. Ids are the points' canonical
/// `pre(period)` strings.
pub fn orbital_ball(x: &BoundaryPoint, gens: &[GroupWord], r: usize, depth: usize) -> Result<MarkedGraph> {
    Ok(explore(x, gens, r, depth)?.0)
}

/// The ball plus the boundary point behind each vertex.
fn explore(
    x: &BoundaryPoint,
    gens: &[GroupWord],
    r: usize,
    depth: usize,
) -> Result<(MarkedGraph, Vec<BoundaryPoint>, Vec<usize>)> {
    let mut points = vec![x.clone()];
    let mut dist = vec![0usize];
    let mut keys: HashMap<OrbitPointKey, usize> = HashMap::from([(OrbitPointKey(Vec::new()), 0)]);
    // points indexed by the positions below `depth` where they differ from x
    let mut prefixes: HashMap<Vec<usize>, usize> = HashMap::from([(Vec::new(), 0)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for (l, w) in gens.iter().enumerate() {
            let image = act_boundary(w, &points[v]);
            let key = OrbitPointKey::new(x, &image).expect("orbit points are cofinal");
            let target = match keys.get(&key) {
                Some(&t) => Some(t),
                None if dist[v] < r => {
                    let short: Vec<usize> = key.0.iter().copied().filter(|&p| p < depth).collect();
                    if let Some(&other) = prefixes.get(&short) {
                        return Err(Error::DepthTooSmall {
                            depth,
                            first: points[other].to_string(),
                            second: image.to_string(),
                        });
                    }
                    let t = points.len();
                    prefixes.insert(short, t);
                    keys.insert(key, t);
                    points.push(image);
                    dist.push(dist[v] + 1);
                    queue.push_back(t);
                    Some(t)
                }
                None => None,
            };
            if let Some(t) = target {
                edges.push((v, t, l));
            }
        }
    }
    let ids = points.iter().map(BoundaryPoint::to_string).collect();
    let mut g = MarkedGraph::with_vertices(ids, 0, label_names(gens));
    for (s, t, l) in edges {
        let added = g.add_edge(s, t, l);
        debug_assert!(added);
    }
    // edges from outer-shell vertices back into the ball
    for v in 0..points.len() {
        for (l, w) in gens.iter().enumerate() {
            if g.out[l][v].is_none() {
                let key = OrbitPointKey::new(x, &act_boundary(w, &points[v])).expect("cofinal");
                if let Some(&t) = keys.get(&key) {
                    g.add_edge(v, t, l);
                }
            }
        }
    }
    Ok((g, points, dist))
}

/// Canonical code of the component of `start`: vertices numbered by a
/// breadth-first traversal following out-edges then in-edges label by
/// label, each followed by its neighbour numbers. Since labeled edges are
/// unique, equal codes mean a start-preserving isomorphism exists.
fn component_code(g: &MarkedGraph, start: usize, seen: &mut [bool]) -> Vec<i64> {
    let mut number: HashMap<usize, i64> = HashMap::from([(start, 0)]);
    let mut order = vec![start];
    seen[start] = true;
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        k += 1;
        for l in 0..g.labels.len() {
            for next in [g.out[l][v], g.inc[l][v]].into_iter().flatten() {
                if let std::collections::hash_map::Entry::Vacant(e) = number.entry(next) {
                    e.insert(order.len() as i64);
                    order.push(next);
                    seen[next] = true;
                }
            }
        }
    }
    let mut code = vec![order.len() as i64];
    for &v in &order {
        for l in 0..g.labels.len() {
            code.push(g.out[l][v].map_or(-1, |t| number[&t]));
            code.push(g.inc[l][v].map_or(-1, |s| number[&s]));
        }
    }
    code
}

/// Whether a root- and label-preserving isomorphism exists.
///
/// The root component is matched by forced traversal. Components not
/// reachable from the root are compared as multisets of their least codes
/// over all start vertices.
pub fn balls_isomorphic(g1: &MarkedGraph, g2: &MarkedGraph) -> bool {
    if g1.vertex_count() != g2.vertex_count() || g1.labels.len() != g2.labels.len() {
        return false;
    }
    // align g2's labels with g1's
    let Some(perm) = g1
        .labels
        .iter()
        .map(|l| g2.label_index(l))
        .collect::<Option<Vec<usize>>>()
    else {
        return false;
    };
    let g2 = MarkedGraph {
        ids: g2.ids.clone(),
        root: g2.root,
        labels: g1.labels.clone(),
        out: perm.iter().map(|&i| g2.out[i].clone()).collect(),
        inc: perm.iter().map(|&i| g2.inc[i].clone()).collect(),
    };
    let mut seen1 = vec![false; g1.vertex_count()];
    let mut seen2 = vec![false; g2.vertex_count()];
    if component_code(g1, g1.root, &mut seen1) != component_code(&g2, g2.root, &mut seen2) {
        return false;
    }
    other_components(g1, &seen1) == other_components(&g2, &seen2)
}

fn other_components(g: &MarkedGraph, seen: &[bool]) -> BTreeMap<Vec<i64>, usize> {
    let mut seen = seen.to_vec();
    let mut codes = BTreeMap::new();
    for v in 0..g.vertex_count() {
        if seen[v] {
            continue;
        }
        let mut members = vec![false; g.vertex_count()];
        component_code(g, v, &mut members);
        let least = (0..g.vertex_count())
            .filter(|&u| members[u])
            .map(|u| component_code(g, u, &mut vec![false; g.vertex_count()]))
            .min()
            .expect("component is nonempty");
        for (s, m) in seen.iter_mut().zip(&members) {
            *s |= m;
        }
        *codes.entry(least).or_insert(0) += 1;
    }
    codes
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeOutcome {
    /// A vertex of the orbital graph of `y`, keyed against `y`, whose ball
    /// matches the ball at `x`.
    FoundAt {
        key: OrbitPointKey,
        point: BoundaryPoint,
        distance: usize,
    },
    NotFoundWithin(usize),
}

/// The standard generating set `{a, b, c, d}`.
pub fn standard_generators() -> Vec<GroupWord> {
    Gen::ALL.iter().map(|&g| GroupWord::letter(g)).collect()
}

/// Searches the orbital graph of `y`, breadth first up to `search_radius`,
/// for a vertex whose radius-`k` ball matches the radius-`k` ball at `x`,
/// both for the standard generators.
pub fn local_iso_probe(
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    k: usize,
    search_radius: usize,
    depth: usize,
) -> Result<ProbeOutcome> {
    if k > search_radius {
        return Err(Error::InvalidArgument(format!(
            "ball radius {k} exceeds search radius {search_radius}"
        )));
    }
    let gens = standard_generators();
    let target = orbital_ball(x, &gens, k, depth)?;
    let (_, points, dist) = explore(y, &gens, search_radius, depth)?;
    for (point, d) in points.iter().zip(dist) {
        let ball = orbital_ball(point, &gens, k, depth)?;
        if balls_isomorphic(&target, &ball) {
            return Ok(ProbeOutcome::FoundAt {
                key: OrbitPointKey::new(y, point).expect("cofinal"),
                point: point.clone(),
                distance: d,
            });
        }
    }
    Ok(ProbeOutcome::NotFoundWithin(search_radius))
}
