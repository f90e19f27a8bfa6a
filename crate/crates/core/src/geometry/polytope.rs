use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    angle_between, cross, distance, dot, norm, normalize, sub, ConvexBody, DisplacementMap,
    DistanceKind, IntrinsicDistance, MeanWidthMethod, Point,
};
use crate::error::{Error, Result};
use crate::rng::{substream, unit_vector};

/// Steiner points per edge used when none is configured.
pub const DEFAULT_STEINER_POINTS: usize = 8;

const PLANE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
struct Face {
    /// Vertex indices, counter-clockwise seen from outside.
    indices: Vec<usize>,
    normal: [f64; 3],
    offset: f64,
    area: f64,
}

#[derive(Clone, Debug, PartialEq)]
struct Edge {
    a: usize,
    b: usize,
    faces: [usize; 2],
}

/// Network of vertices and edge Steiner points with all straight chords
/// inside each face.
#[derive(Debug)]
struct SteinerGraph {
    nodes: Vec<[f64; 3]>,
    /// CSR adjacency.
    starts: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    /// Graph nodes on the boundary of each face.
    face_nodes: Vec<Vec<usize>>,
}

/// Convex polytope in ℝ³ with planar convex faces.
#[derive(Debug)]
pub struct Polytope3 {
    name: String,
    vertices: Vec<[f64; 3]>,
    faces: Vec<Face>,
    edges: Vec<Edge>,
    steiner_points: usize,
    /// Area-weighted fan triangles `(face, a, b, c)` and their cumulative areas.
    triangles: Vec<(usize, [usize; 3])>,
    cumulative: Vec<f64>,
    graph: OnceLock<SteinerGraph>,
}

impl Clone for Polytope3 {
    fn clone(&self) -> Self {
        Polytope3 {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            faces: self.faces.clone(),
            edges: self.edges.clone(),
            steiner_points: self.steiner_points,
            triangles: self.triangles.clone(),
            cumulative: self.cumulative.clone(),
            graph: OnceLock::new(),
        }
    }
}

fn triangle_area(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    0.5 * norm(&cross(&sub(b, a), &sub(c, a)))
}

impl Polytope3 {
    /// Builds a polytope from explicit faces, checking planarity, convexity
    /// and the Euler relation. Face orientation is fixed up automatically.
    pub fn from_faces(
        name: impl Into<String>,
        vertices: Vec<[f64; 3]>,
        faces: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if vertices.len() < 4 || faces.len() < 4 {
            return Err(Error::domain(
                "a polytope needs at least 4 vertices and 4 faces",
            ));
        }
        let inside = {
            let mut c = [0.0; 3];
            for v in &vertices {
                for k in 0..3 {
                    c[k] += v[k] / vertices.len() as f64;
                }
            }
            c
        };
        let mut built = Vec::with_capacity(faces.len());
        for mut idx in faces {
            if idx.len() < 3 || idx.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::domain("face with fewer than 3 valid vertices"));
            }
            // Newell normal
            let mut n = [0.0; 3];
            for i in 0..idx.len() {
                let a = vertices[idx[i]];
                let b = vertices[idx[(i + 1) % idx.len()]];
                n[0] += (a[1] - b[1]) * (a[2] + b[2]);
                n[1] += (a[2] - b[2]) * (a[0] + b[0]);
                n[2] += (a[0] - b[0]) * (a[1] + b[1]);
            }
            let len = norm(&n);
            if !(len > 1e-14) {
                return Err(Error::domain("degenerate face"));
            }
            let mut normal = [n[0] / len, n[1] / len, n[2] / len];
            let mut offset = dot(&normal, &vertices[idx[0]]);
            if dot(&normal, &inside) > offset {
                idx.reverse();
                normal = [-normal[0], -normal[1], -normal[2]];
                offset = -offset;
            }
            for &i in &idx {
                if (dot(&normal, &vertices[i]) - offset).abs() > PLANE_TOLERANCE {
                    return Err(Error::domain("non-planar face"));
                }
            }
            let area = 0.5 * len;
            built.push(Face {
                indices: idx,
                normal,
                offset,
                area,
            });
        }
        for f in &built {
            for v in &vertices {
                if dot(&f.normal, v) - f.offset > PLANE_TOLERANCE {
                    return Err(Error::domain("vertex outside a face plane: not convex"));
                }
            }
        }
        let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, f) in built.iter().enumerate() {
            for i in 0..f.indices.len() {
                let a = f.indices[i];
                let b = f.indices[(i + 1) % f.indices.len()];
                edge_faces.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        let mut edges = Vec::with_capacity(edge_faces.len());
        for ((a, b), fs) in edge_faces {
            if fs.len() != 2 {
                return Err(Error::domain("edge not shared by exactly two faces"));
            }
            edges.push(Edge {
                a,
                b,
                faces: [fs[0], fs[1]],
            });
        }
        let used: BTreeSet<usize> = built
            .iter()
            .flat_map(|f| f.indices.iter().copied())
            .collect();
        let euler = used.len() as i64 - edges.len() as i64 + built.len() as i64;
        if euler != 2 || used.len() != vertices.len() {
            return Err(Error::domain(format!("Euler characteristic {euler} != 2")));
        }
        let mut triangles = Vec::new();
        let mut cumulative = Vec::new();
        let mut total = 0.0;
        for (fi, f) in built.iter().enumerate() {
            for k in 1..f.indices.len() - 1 {
                let tri = [f.indices[0], f.indices[k], f.indices[k + 1]];
                total += triangle_area(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]);
                triangles.push((fi, tri));
                cumulative.push(total);
            }
        }
        Ok(Polytope3 {
            name: name.into(),
            vertices,
            faces: built,
            edges,
            steiner_points: DEFAULT_STEINER_POINTS,
            triangles,
            cumulative,
            graph: OnceLock::new(),
        })
    }

    /// Convex hull of a point set; coplanar hull triangles are merged into faces.
    pub fn hull(name: impl Into<String>, points: &[[f64; 3]]) -> Result<Self> {
        let (used, faces) = hull_faces(points)?;
        let mut remap = BTreeMap::new();
        let mut vertices = Vec::new();
        for &i in &used {
            remap.insert(i, vertices.len());
            vertices.push(points[i]);
        }
        let faces = faces
            .into_iter()
            .map(|f| f.into_iter().map(|i| remap[&i]).collect())
            .collect();
        Polytope3::from_faces(name, vertices, faces)
    }

    /// Axis-aligned cube of edge `a` centred at the origin. Faces are numbered
    /// like a die: `i` and `5 − i` are opposite.
    pub fn cube(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain("cube edge must be positive"));
        }
        let h = 0.5 * a;
        let vertices: Vec<[f64; 3]> = (0..8)
            .map(|i| {
                [
                    if i & 1 == 0 { -h } else { h },
                    if i & 2 == 0 { -h } else { h },
                    if i & 4 == 0 { -h } else { h },
                ]
            })
            .collect();
        let faces = vec![
            vec![0, 2, 3, 1], // z = −h
            vec![0, 1, 5, 4], // y = −h
            vec![1, 3, 7, 5], // x = +h
            vec![0, 4, 6, 2], // x = −h
            vec![2, 6, 7, 3], // y = +h
            vec![4, 5, 7, 6], // z = +h
        ];
        Polytope3::from_faces("cube", vertices, faces)
    }

    /// Regular tetrahedron with the given edge length.
    pub fn regular_tetrahedron(edge: f64) -> Result<Self> {
        let s = edge / (2.0 * 2f64.sqrt());
        let pts = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
        Polytope3::hull("tetrahedron", &pts)
    }

    /// Hull of `vertex_count` points on the unit sphere with radial jitter.
    /// Degenerate draws are replaced by the next substream.
    pub fn random(seed: u64, vertex_count: usize) -> Result<Self> {
        if vertex_count < 4 {
            return Err(Error::domain("a random polytope needs at least 4 points"));
        }
        for attempt in 0..64 {
            let mut rng = substream(seed, "polytope", attempt);
            let pts: Vec<[f64; 3]> = (0..vertex_count)
                .map(|_| {
                    let u = unit_vector(&mut rng, 3);
                    let r = 0.85 + 0.3 * rng.random::<f64>();
                    [u[0] * r, u[1] * r, u[2] * r]
                })
                .collect();
            if let Ok(p) = Polytope3::hull(format!("polytope_s{seed}"), &pts) {
                return Ok(p);
            }
        }
        Err(Error::Numerical {
            what: "random polytope".into(),
            diagnostics: format!("64 degenerate draws for seed {seed}"),
        })
    }

    /// Image under the diagonal linear map `diag(factors)`.
    pub fn scaled(&self, factors: [f64; 3], name: impl Into<String>) -> Result<Self> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| [v[0] * factors[0], v[1] * factors[1], v[2] * factors[2]])
            .collect();
        let faces = self.faces.iter().map(|f| f.indices.clone()).collect();
        let mut p = Polytope3::from_faces(name, vertices, faces)?;
        p.steiner_points = self.steiner_points;
        Ok(p)
    }

    /// Same polytope with `m` Steiner points per edge in the geodesic graph.
    pub fn with_steiner_points(&self, m: usize) -> Self {
        let mut p = self.clone();
        p.steiner_points = m;
        p
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn steiner_points(&self) -> usize {
        self.steiner_points
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Average of the vertices of face `i`.
    pub fn face_center(&self, i: usize) -> Option<Point> {
        let f = self.faces.get(i)?;
        let mut c = vec![0.0; 3];
        for &v in &f.indices {
            for (ck, vk) in c.iter_mut().zip(self.vertices[v]) {
                *ck += vk / f.indices.len() as f64;
            }
        }
        Some(c)
    }

    pub fn face_normal(&self, i: usize) -> Option<Point> {
        self.faces.get(i).map(|f| f.normal.to_vec())
    }

    /// `(1/4π) Σ_edges length · exterior dihedral angle`.
    pub fn edge_formula_mean_width(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| {
                let len = distance(&self.vertices[e.a], &self.vertices[e.b]);
                let n1 = self.faces[e.faces[0]].normal;
                let n2 = self.faces[e.faces[1]].normal;
                len * angle_between(&n1, &n2)
            })
            .sum::<f64>()
            / (4.0 * PI)
    }

    /// Area of the orthogonal projection onto the plane with unit normal `ν`.
    pub fn projected_area(&self, normal: &[f64]) -> f64 {
        let u = normalize(normal);
        0.5 * self
            .faces
            .iter()
            .map(|f| dot(&f.normal, &u).abs() * f.area)
            .sum::<f64>()
    }

    fn faces_containing(&self, x: &[f64]) -> Vec<usize> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, f)| (dot(&f.normal, x) - f.offset).abs() <= PLANE_TOLERANCE)
            .map(|(i, _)| i)
            .collect()
    }

    fn graph(&self) -> &SteinerGraph {
        self.graph.get_or_init(|| build_graph(self))
    }

    fn graph_distance(&self, x: &[f64], y: &[f64], fx: &[usize], fy: &[usize]) -> f64 {
        let g = self.graph();
        let mut dist = vec![f64::INFINITY; g.nodes.len()];
        let mut heap = BinaryHeap::new();
        for &f in fx {
            for &node in &g.face_nodes[f] {
                let d = distance(x, &g.nodes[node]);
                if d < dist[node] {
                    dist[node] = d;
                    heap.push(State { cost: d, node });
                }
            }
        }
        let mut exit = vec![f64::INFINITY; g.nodes.len()];
        for &f in fy {
            for &node in &g.face_nodes[f] {
                exit[node] = exit[node].min(distance(y, &g.nodes[node]));
            }
        }
        let mut best = f64::INFINITY;
        while let Some(State { cost, node }) = heap.pop() {
            if cost > dist[node] || cost >= best {
                if cost >= best {
                    break;
                }
                continue;
            }
            best = best.min(cost + exit[node]);
            for k in g.starts[node]..g.starts[node + 1] {
                let next = g.targets[k];
                let c = cost + g.weights[k];
                if c < dist[next] {
                    dist[next] = c;
                    heap.push(State {
                        cost: c,
                        node: next,
                    });
                }
            }
        }
        best
    }
}

#[derive(Clone, Copy, PartialEq)]
struct State {
    cost: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn build_graph(p: &Polytope3) -> SteinerGraph {
    let m = p.steiner_points;
    let mut nodes: Vec<[f64; 3]> = p.vertices.clone();
    let mut edge_nodes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in &p.edges {
        let a = p.vertices[e.a];
        let b = p.vertices[e.b];
        let mut ids = Vec::with_capacity(m);
        for i in 1..=m {
            let t = i as f64 / (m + 1) as f64;
            ids.push(nodes.len());
            nodes.push([
                a[0] + t * (b[0] - a[0]),
                a[1] + t * (b[1] - a[1]),
                a[2] + t * (b[2] - a[2]),
            ]);
        }
        edge_nodes.insert((e.a, e.b), ids);
    }
    let face_nodes: Vec<Vec<usize>> = p
        .faces
        .iter()
        .map(|f| {
            let mut ids = Vec::new();
            for i in 0..f.indices.len() {
                let a = f.indices[i];
                let b = f.indices[(i + 1) % f.indices.len()];
                ids.push(a);
                ids.extend(&edge_nodes[&(a.min(b), a.max(b))]);
            }
            ids
        })
        .collect();
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
    for ids in &face_nodes {
        for (i, &u) in ids.iter().enumerate() {
            for &v in &ids[i + 1..] {
                let w = distance(&nodes[u], &nodes[v]);
                adjacency[u].push((v, w));
                adjacency[v].push((u, w));
            }
        }
    }
    let mut starts = Vec::with_capacity(nodes.len() + 1);
    let mut targets = Vec::new();
    let mut weights = Vec::new();
    for adj in adjacency {
        starts.push(targets.len());
        for (v, w) in adj {
            targets.push(v);
            weights.push(w);
        }
    }
    starts.push(targets.len());
    SteinerGraph {
        nodes,
        starts,
        targets,
        weights,
        face_nodes,
    }
}

/// Incremental hull: returns the indices of hull vertices and the merged faces.
fn hull_faces(points: &[[f64; 3]]) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    let degenerate = |msg: &str| Error::domain(format!("degenerate hull: {msg}"));
    if points.len() < 4 {
        return Err(degenerate("fewer than 4 points"));
    }
    let scale = points
        .iter()
        .map(|p| norm(p))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let eps = 1e-10 * scale;

    let i0 = 0;
    let i1 = (0..points.len())
        .max_by(|&a, &b| {
            distance(&points[a], &points[i0]).total_cmp(&distance(&points[b], &points[i0]))
        })
        .expect("nonempty");
    if distance(&points[i1], &points[i0]) <= eps {
        return Err(degenerate("all points coincide"));
    }
    let line = sub(&points[i1], &points[i0]);
    let off_line = |k: usize| norm(&cross(&line, &sub(&points[k], &points[i0]))) / norm(&line);
    let i2 = (0..points.len())
        .max_by(|&a, &b| off_line(a).total_cmp(&off_line(b)))
        .expect("nonempty");
    if off_line(i2) <= eps {
        return Err(degenerate("collinear points"));
    }
    let plane = normalize(&cross(&line, &sub(&points[i2], &points[i0])));
    let off_plane = |k: usize| dot(&plane, &sub(&points[k], &points[i0]));
    let i3 = (0..points.len())
        .max_by(|&a, &b| off_plane(a).abs().total_cmp(&off_plane(b).abs()))
        .expect("nonempty");
    if off_plane(i3).abs() <= eps {
        return Err(degenerate("coplanar points"));
    }

    let mut inside = [0.0; 3];
    for &i in &[i0, i1, i2, i3] {
        for k in 0..3 {
            inside[k] += points[i][k] / 4.0;
        }
    }
    let oriented = |a: usize, b: usize, c: usize| -> [usize; 3] {
        let n = cross(&sub(&points[b], &points[a]), &sub(&points[c], &points[a]));
        if dot(&n, &sub(&inside, &points[a])) > 0.0 {
            [a, c, b]
        } else {
            [a, b, c]
        }
    };
    let mut tris: Vec<[usize; 3]> = vec![
        oriented(i0, i1, i2),
        oriented(i0, i1, i3),
        oriented(i0, i2, i3),
        oriented(i1, i2, i3),
    ];
    let plane_of = |t: &[usize; 3]| -> ([f64; 3], f64) {
        let n = normalize(&cross(
            &sub(&points[t[1]], &points[t[0]]),
            &sub(&points[t[2]], &points[t[0]]),
        ));
        let n = [n[0], n[1], n[2]];
        (n, dot(&n, &points[t[0]]))
    };

    for (k, p) in points.iter().enumerate() {
        if [i0, i1, i2, i3].contains(&k) {
            continue;
        }
        let visible: Vec<bool> = tris
            .iter()
            .map(|t| {
                let (n, d) = plane_of(t);
                dot(&n, p) - d > eps
            })
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut directed = BTreeSet::new();
        for (t, _) in tris.iter().zip(&visible).filter(|(_, &v)| v) {
            for i in 0..3 {
                directed.insert((t[i], t[(i + 1) % 3]));
            }
        }
        let horizon: Vec<(usize, usize)> = directed
            .iter()
            .filter(|(a, b)| !directed.contains(&(*b, *a)))
            .copied()
            .collect();
        let mut next: Vec<[usize; 3]> = tris
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(t, _)| *t)
            .collect();
        for (a, b) in horizon {
            next.push([a, b, k]);
        }
        tris = next;
    }

    // merge coplanar neighbours
    let planes: Vec<([f64; 3], f64)> = tris.iter().map(plane_of).collect();
    let mut parent: Vec<usize> = (0..tris.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let nxt = parent[j];
            parent[j] = r;
            j = nxt;
        }
        r
    }
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (ti, t) in tris.iter().enumerate() {
        for i in 0..3 {
            owner.insert((t[i], t[(i + 1) % 3]), ti);
        }
    }
    for (ti, t) in tris.iter().enumerate() {
        for i in 0..3 {
            if let Some(&tj) = owner.get(&(t[(i + 1) % 3], t[i])) {
                let (n1, d1) = planes[ti];
                let (n2, d2) = planes[tj];
                if dot(&n1, &n2) > 1.0 - 1e-12 && (d1 - d2).abs() <= eps {
                    let a = find(&mut parent, ti);
                    let b = find(&mut parent, tj);
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for ti in 0..tris.len() {
        let r = find(&mut parent, ti);
        groups.entry(r).or_default().push(ti);
    }
    let mut faces = Vec::with_capacity(groups.len());
    for members in groups.values() {
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &ti in members {
            let t = tris[ti];
            for i in 0..3 {
                edges.insert((t[i], t[(i + 1) % 3]));
            }
        }
        let boundary: BTreeMap<usize, usize> = edges
            .iter()
            .filter(|(a, b)| !edges.contains(&(*b, *a)))
            .map(|&(a, b)| (a, b))
            .collect();
        let start = *boundary
            .keys()
            .next()
            .ok_or_else(|| degenerate("empty face"))?;
        let mut cycle = vec![start];
        let mut cur = boundary[&start];
        while cur != start {
            cycle.push(cur);
            cur = *boundary
                .get(&cur)
                .ok_or_else(|| degenerate("open face boundary"))?;
            if cycle.len() > boundary.len() {
                return Err(degenerate("face boundary is not a simple cycle"));
            }
        }
        if cycle.len() != boundary.len() {
            return Err(degenerate("face boundary is not a simple cycle"));
        }
        faces.push(cycle);
    }
    let used: Vec<usize> = faces
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok((used, faces))
}

impl ConvexBody for Polytope3 {
    fn id(&self) -> String {
        self.name.clone()
    }

    fn ambient_dimension(&self) -> usize {
        3
    }

    fn support(&self, direction: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, direction))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn boundary_area(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    fn enclosed_volume(&self) -> f64 {
        let c = self.interior_point();
        self.faces
            .iter()
            .map(|f| f.area * (f.offset - dot(&f.normal, &c)) / 3.0)
            .sum()
    }

    fn interior_point(&self) -> Point {
        let mut c = vec![0.0; 3];
        for v in &self.vertices {
            for k in 0..3 {
                c[k] += v[k] / self.vertices.len() as f64;
            }
        }
        c
    }

    fn surface_gap(&self, x: &[f64]) -> f64 {
        self.faces
            .iter()
            .map(|f| dot(&f.normal, x) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max)
            .abs()
    }

    fn intrinsic_distance_unchecked(&self, x: &[f64], y: &[f64]) -> IntrinsicDistance {
        let fx = self.faces_containing(x);
        let fy = self.faces_containing(y);
        if fx.iter().any(|f| fy.contains(f)) {
            return IntrinsicDistance::exact(distance(x, y));
        }
        IntrinsicDistance {
            value: self.graph_distance(x, y, &fx, &fy),
            kind: DistanceKind::UpperBound,
        }
    }

    fn sample_boundary(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<Point> {
        let total = *self.cumulative.last().expect("nonempty");
        (0..count)
            .map(|_| {
                let pick = rng.random::<f64>() * total;
                let i = self
                    .cumulative
                    .partition_point(|&c| c <= pick)
                    .min(self.triangles.len() - 1);
                let [a, b, c] = self.triangles[i].1;
                let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
                if u + v > 1.0 {
                    u = 1.0 - u;
                    v = 1.0 - v;
                }
                let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
                (0..3)
                    .map(|k| pa[k] + u * (pb[k] - pa[k]) + v * (pc[k] - pa[k]))
                    .collect()
            })
            .collect()
    }

    fn ray_exit(&self, origin: &[f64], direction: &[f64]) -> f64 {
        self.faces
            .iter()
            .filter_map(|f| {
                let along = dot(&f.normal, direction);
                (along > 0.0).then(|| (f.offset - dot(&f.normal, origin)) / along)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn symmetry_center(&self) -> Option<Point> {
        let c = self.interior_point();
        let symmetric = self.vertices.iter().all(|v| {
            let mirrored: Vec<f64> = (0..3).map(|k| 2.0 * c[k] - v[k]).collect();
            self.vertices.iter().any(|w| distance(w, &mirrored) < 1e-12)
        });
        symmetric.then_some(c)
    }

    fn width_candidates(&self) -> Option<Vec<Point>> {
        let mut dirs: Vec<Point> = self.faces.iter().map(|f| f.normal.to_vec()).collect();
        let edge_dirs: Vec<Point> = self
            .edges
            .iter()
            .map(|e| sub(&self.vertices[e.b], &self.vertices[e.a]))
            .collect();
        for (i, a) in edge_dirs.iter().enumerate() {
            for b in &edge_dirs[i + 1..] {
                let c = cross(a, b);
                if norm(&c) > 1e-12 * norm(a) * norm(b) {
                    dirs.push(normalize(&c));
                }
            }
        }
        Some(dirs)
    }

    fn critical_points(&self, _map: &DisplacementMap) -> Vec<Point> {
        let mut pts: Vec<Point> = self.vertices.iter().map(|v| v.to_vec()).collect();
        pts.extend((0..self.faces.len()).filter_map(|i| self.face_center(i)));
        pts.extend(self.edges.iter().map(|e| {
            let a = self.vertices[e.a];
            let b = self.vertices[e.b];
            vec![
                0.5 * (a[0] + b[0]),
                0.5 * (a[1] + b[1]),
                0.5 * (a[2] + b[2]),
            ]
        }));
        pts
    }

    fn exact_mean_width(&self) -> Option<(f64, MeanWidthMethod)> {
        Some((
            self.edge_formula_mean_width(),
            MeanWidthMethod::PolytopeEdgeFormula,
        ))
    }

    fn as_polytope(&self) -> Option<&Polytope3> {
        Some(self)
    }
}
