use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{seeded_rng, sub_seed};

/// One constraint: labels `a` at `u` and `b` at `v` agree when
/// `pi_u[a] == pi_v[b]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub pi_u: Vec<usize>,
    pub pi_v: Vec<usize>,
}

impl Edge {
    pub fn is_satisfied(&self, labeling: &Labeling) -> bool {
        self.pi_u[labeling.label(self.u)] == self.pi_v[labeling.label(self.v)]
    }
}

/// A projection game on `vertices` vertices with big labels `[R]` and small
/// labels `[L]`. Vertices and labels are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelCoverInstance {
    vertices: usize,
    big_labels: usize,
    small_labels: usize,
    edges: Vec<Edge>,
}

impl LabelCoverInstance {
    pub fn new(
        vertices: usize,
        big_labels: usize,
        small_labels: usize,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::domain("label cover needs at least one vertex"));
        }
        if small_labels == 0 || small_labels > big_labels {
            return Err(Error::domain(format!(
                "label sizes must satisfy 1 <= L <= R, got R = {big_labels}, L = {small_labels}"
            )));
        }
        for (k, e) in edges.iter().enumerate() {
            if e.u >= vertices || e.v >= vertices {
                return Err(Error::domain(format!(
                    "edge {k} has an endpoint outside 0..{vertices}"
                )));
            }
            for pi in [&e.pi_u, &e.pi_v] {
                if pi.len() != big_labels {
                    return Err(Error::domain(format!(
                        "edge {k}: projection has {} entries, expected {big_labels}",
                        pi.len()
                    )));
                }
                if let Some(&bad) = pi.iter().find(|&&l| l >= small_labels) {
                    return Err(Error::domain(format!(
                        "edge {k}: label {bad} outside 0..{small_labels}"
                    )));
                }
            }
        }
        Ok(Self {
            vertices,
            big_labels,
            small_labels,
            edges,
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn big_labels(&self) -> usize {
        self.big_labels
    }

    pub fn small_labels(&self) -> usize {
        self.small_labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.vertices;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// Number of edges the labeling satisfies.
    pub fn satisfied_edges(&self, labeling: &Labeling) -> usize {
        self.edges
            .iter()
            .filter(|e| e.is_satisfied(labeling))
            .count()
    }

    pub fn check_labeling(&self, labeling: &Labeling) -> Result<()> {
        if labeling.len() != self.vertices {
            return Err(Error::dimension(format!(
                "labeling has {} entries for {} vertices",
                labeling.len(),
                self.vertices
            )));
        }
        if let Some(&bad) = labeling.as_slice().iter().find(|&&l| l >= self.big_labels) {
            return Err(Error::domain(format!(
                "label {bad} outside 0..{}",
                self.big_labels
            )));
        }
        Ok(())
    }
}

/// An assignment `V → [R]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Labeling(Vec<usize>);

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Self {
        Self(labels)
    }

    pub fn label(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceStats {
    /// Largest preimage of any endpoint projection.
    pub d_to_1: usize,
    /// Largest fraction of a vertex's incident edges on which two distinct
    /// labels collide.
    pub smoothness_emp: f64,
    pub connected: bool,
}

pub fn instance_stats(inst: &LabelCoverInstance) -> InstanceStats {
    let r = inst.big_labels;
    let mut d_to_1 = 0;
    let mut incident = vec![0usize; inst.vertices];
    // collisions[v][i*r + j] counts incident edges where labels i and j collide at v
    let mut collisions = vec![vec![0usize; r * r]; inst.vertices];
    for e in &inst.edges {
        for (v, pi) in [(e.u, &e.pi_u), (e.v, &e.pi_v)] {
            let mut counts = vec![0usize; inst.small_labels];
            for &l in pi {
                counts[l] += 1;
            }
            d_to_1 = d_to_1.max(counts.into_iter().max().unwrap_or(0));
            incident[v] += 1;
            for i in 0..r {
                for j in i + 1..r {
                    if pi[i] == pi[j] {
                        collisions[v][i * r + j] += 1;
                    }
                }
            }
        }
    }
    let mut smoothness_emp: f64 = 0.0;
    for v in 0..inst.vertices {
        if incident[v] == 0 {
            continue;
        }
        let worst = collisions[v].iter().copied().max().unwrap_or(0);
        smoothness_emp = smoothness_emp.max(worst as f64 / incident[v] as f64);
    }
    InstanceStats {
        d_to_1,
        smoothness_emp,
        connected: inst.is_connected(),
    }
}

const MAX_GRAPH_ATTEMPTS: u64 = 1000;

/// Random `degree`-regular multigraph with random projections.
///
/// With `satisfiable`, a random labeling is drawn and each edge's `v`-side map
/// is patched to agree with it; the labeling is returned. Otherwise all maps
/// are independent and uniform. Pairings are redrawn until the graph is
/// connected and loop-free, up to a fixed number of attempts.
pub fn generate_planted(
    vertices: usize,
    degree: usize,
    big_labels: usize,
    small_labels: usize,
    seed: u64,
    satisfiable: bool,
) -> Result<(LabelCoverInstance, Option<Labeling>)> {
    if vertices == 0 || degree == 0 {
        return Err(Error::domain(
            "planted instance needs vertices >= 1 and degree >= 1",
        ));
    }
    if vertices * degree % 2 != 0 {
        return Err(Error::domain(format!(
            "no {degree}-regular graph on {vertices} vertices: odd stub count"
        )));
    }
    if small_labels == 0 || small_labels > big_labels {
        return Err(Error::domain("label sizes must satisfy 1 <= L <= R"));
    }
    let mut pairs = Vec::new();
    for attempt in 0..MAX_GRAPH_ATTEMPTS {
        let mut rng = seeded_rng(sub_seed(seed, attempt));
        let mut stubs: Vec<usize> = (0..vertices)
            .flat_map(|v| std::iter::repeat(v).take(degree))
            .collect();
        stubs.shuffle(&mut rng);
        pairs = stubs.chunks(2).map(|c| (c[0], c[1])).collect::<Vec<_>>();
        let loop_free = vertices == 1 || pairs.iter().all(|&(a, b)| a != b);
        let probe = LabelCoverInstance {
            vertices,
            big_labels,
            small_labels,
            edges: pairs
                .iter()
                .map(|&(u, v)| Edge {
                    u,
                    v,
                    pi_u: Vec::new(),
                    pi_v: Vec::new(),
                })
                .collect(),
        };
        if loop_free && probe.is_connected() {
            break;
        }
    }
    let mut rng = seeded_rng(sub_seed(seed, u64::MAX));
    let labeling = satisfiable.then(|| {
        Labeling(
            (0..vertices)
                .map(|_| rng.random_range(0..big_labels))
                .collect(),
        )
    });
    let random_map = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<usize> {
        (0..big_labels)
            .map(|_| rng.random_range(0..small_labels))
            .collect()
    };
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let pi_u = random_map(&mut rng);
            let mut pi_v = random_map(&mut rng);
            if let Some(l) = &labeling {
                pi_v[l.label(v)] = pi_u[l.label(u)];
            }
            Edge { u, v, pi_u, pi_v }
        })
        .collect();
    let inst = LabelCoverInstance::new(vertices, big_labels, small_labels, edges)?;
    Ok((inst, labeling))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_constant_projections() {
        let id: Vec<usize> = (0..4).collect();
        let inst = LabelCoverInstance::new(
            2,
            4,
            4,
            vec![Edge {
                u: 0,
                v: 1,
                pi_u: id.clone(),
                pi_v: id,
            }],
        )
        .unwrap();
        let s = instance_stats(&inst);
        assert_eq!((s.d_to_1, s.smoothness_emp, s.connected), (1, 0.0, true));

        let c = vec![0; 4];
        let inst = LabelCoverInstance::new(
            2,
            4,
            1,
            vec![Edge {
                u: 0,
                v: 1,
                pi_u: c.clone(),
                pi_v: c,
            }],
        )
        .unwrap();
        let s = instance_stats(&inst);
        assert_eq!((s.d_to_1, s.smoothness_emp), (4, 1.0));
    }

    #[test]
    fn disconnected_is_flagged() {
        let inst = LabelCoverInstance::new(
            3,
            2,
            2,
            vec![Edge {
                u: 0,
                v: 1,
                pi_u: vec![0, 1],
                pi_v: vec![1, 0],
            }],
        )
        .unwrap();
        assert!(!instance_stats(&inst).connected);
    }

    #[test]
    fn planted_instances_certify() {
        for seed in 0..30 {
            let (inst, l) = generate_planted(6, 3, 5, 3, seed, true).unwrap();
            let l = l.unwrap();
            assert_eq!(inst.satisfied_edges(&l), inst.edges().len());
            assert!(inst.is_connected());
            let s = instance_stats(&inst);
            assert!(s.d_to_1 <= 5);
            // recompute d_to_1 from the maps directly
            let d = inst
                .edges()
                .iter()
                .flat_map(|e| [&e.pi_u, &e.pi_v])
                .map(|pi| {
                    (0..3)
                        .map(|l| pi.iter().filter(|&&x| x == l).count())
                        .max()
                        .unwrap()
                })
                .max()
                .unwrap();
            assert_eq!(s.d_to_1, d);
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate_planted(8, 3, 4, 2, 42, false).unwrap();
        let b = generate_planted(8, 3, 4, 2, 42, false).unwrap();
        assert_eq!(a, b);
        assert!(a.1.is_none());
        assert_ne!(a.0, generate_planted(8, 3, 4, 2, 43, false).unwrap().0);
    }

    #[test]
    fn validation() {
        assert!(LabelCoverInstance::new(2, 2, 3, vec![]).is_err());
        assert!(LabelCoverInstance::new(
            2,
            2,
            2,
            vec![Edge {
                u: 0,
                v: 2,
                pi_u: vec![0, 0],
                pi_v: vec![0, 0]
            }]
        )
        .is_err());
        assert!(LabelCoverInstance::new(
            2,
            2,
            2,
            vec![Edge {
                u: 0,
                v: 1,
                pi_u: vec![0, 2],
                pi_v: vec![0, 0]
            }]
        )
        .is_err());
        assert!(generate_planted(3, 3, 2, 2, 0, true).is_err());
    }
}
