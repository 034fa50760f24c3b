//! Finite-volume meshes. Nodes sit at cell centres; coordinates are (lateral x, depth).
//!
//! Quantities are per unit length along the electron flight direction, so a node "volume"
//! is an area (m²) and a face "area" is a length (m).

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Face {
    pub a: usize,
    pub b: usize,
    pub area: f64,
    /// Node-to-node distance across the face.
    pub distance: f64,
    pub center: [f64; 2],
    /// Unit normal pointing from `a` to `b`.
    pub normal: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeshKind {
    /// A thin sheet at the surface, lateral nodes only.
    Sheet { nx: usize },
    /// A lateral × depth slab, row-major in x (index = k·nx + i for depth row k).
    Slab { nx: usize, nd: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mesh {
    pub kind: MeshKind,
    pub nodes: Vec<[f64; 2]>,
    pub volume: Vec<f64>,
    /// Lateral cell width of each node.
    pub width: Vec<f64>,
    /// Cell extent across the lateral direction (depth for a slab, thickness for a sheet).
    pub height: Vec<f64>,
    /// Coulomb softening length of each node.
    pub softening: Vec<f64>,
    pub faces: Vec<Face>,
}

impl Mesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sheet of `n` cells over [−half_width, half_width] and thickness `layer`.
    ///
    /// A screened sheet behaves like a conducting strip whose charge density grows as
    /// 1/√(distance) towards its ends, so cell boundaries follow a blend of uniform and
    /// cosine spacing: x = W·((1 − β)(2s − 1) − β·cos πs) with β = `edge_clustering`.
    /// Doubling `n` keeps every coarse boundary, so coarse and fine cells nest exactly.
    pub fn sheet(half_width: f64, n: usize, layer: f64, edge_clustering: f64) -> Mesh {
        let beta = edge_clustering.clamp(0.0, 1.0);
        let xb: Vec<f64> = (0..=n)
            .map(|i| {
                let s = i as f64 / n as f64;
                half_width * ((1.0 - beta) * (2.0 * s - 1.0) - beta * (std::f64::consts::PI * s).cos())
            })
            .collect();
        let hx: Vec<f64> = xb.windows(2).map(|w| w[1] - w[0]).collect();
        let nodes: Vec<[f64; 2]> = xb.windows(2).map(|w| [0.5 * (w[0] + w[1]), 0.0]).collect();
        let faces = (0..n - 1)
            .map(|i| Face {
                a: i,
                b: i + 1,
                area: layer,
                distance: nodes[i + 1][0] - nodes[i][0],
                center: [xb[i + 1], 0.0],
                normal: [1.0, 0.0],
            })
            .collect();
        Mesh {
            kind: MeshKind::Sheet { nx: n },
            nodes,
            volume: hx.iter().map(|h| h * layer).collect(),
            width: hx,
            height: vec![layer; n],
            softening: vec![layer; n],
            faces,
        }
    }

    /// Slab with cells refined towards x = 0 and towards the surface.
    pub fn slab(half_width: f64, nx: usize, thickness: f64, nd: usize, first_depth_cell: f64) -> Mesh {
        let xb = stretched_symmetric(half_width, nx, 2.0);
        let db = geometric_boundaries(thickness, nd, first_depth_cell);
        let xc: Vec<f64> = xb.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let dc: Vec<f64> = db.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let hx: Vec<f64> = xb.windows(2).map(|w| w[1] - w[0]).collect();
        let hd: Vec<f64> = db.windows(2).map(|w| w[1] - w[0]).collect();
        let idx = |i: usize, k: usize| k * nx + i;
        let mut nodes = Vec::with_capacity(nx * nd);
        let mut volume = Vec::with_capacity(nx * nd);
        let mut width = Vec::with_capacity(nx * nd);
        let mut height = Vec::with_capacity(nx * nd);
        let mut softening = Vec::with_capacity(nx * nd);
        for k in 0..nd {
            for i in 0..nx {
                nodes.push([xc[i], dc[k]]);
                volume.push(hx[i] * hd[k]);
                width.push(hx[i]);
                height.push(hd[k]);
                softening.push((hx[i] * hd[k]).sqrt());
            }
        }
        let mut faces = Vec::new();
        for k in 0..nd {
            for i in 0..nx - 1 {
                faces.push(Face {
                    a: idx(i, k),
                    b: idx(i + 1, k),
                    area: hd[k],
                    distance: xc[i + 1] - xc[i],
                    center: [xb[i + 1], dc[k]],
                    normal: [1.0, 0.0],
                });
            }
        }
        for k in 0..nd - 1 {
            for i in 0..nx {
                faces.push(Face {
                    a: idx(i, k),
                    b: idx(i, k + 1),
                    area: hx[i],
                    distance: dc[k + 1] - dc[k],
                    center: [xc[i], db[k + 1]],
                    normal: [0.0, 1.0],
                });
            }
        }
        Mesh {
            kind: MeshKind::Slab { nx, nd },
            nodes,
            volume,
            width,
            height,
            softening,
            faces,
        }
    }

    /// Smallest node-to-node distance.
    pub fn min_distance(&self) -> f64 {
        self.faces.iter().map(|f| f.distance).fold(f64::INFINITY, f64::min)
    }
}

/// Boundaries of `n` cells on [−h, h], finer in the middle: x = h·sinh(k s)/sinh(k).
fn stretched_symmetric(half_width: f64, n: usize, k: f64) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let s = -1.0 + 2.0 * i as f64 / n as f64;
            half_width * (k * s).sinh() / k.sinh()
        })
        .collect()
}

/// Boundaries of `n` cells on [0, total] growing geometrically from `first`.
fn geometric_boundaries(total: f64, n: usize, first: f64) -> Vec<f64> {
    let sum = |r: f64| {
        if (r - 1.0).abs() < 1e-12 {
            first * n as f64
        } else {
            first * (r.powi(n as i32) - 1.0) / (r - 1.0)
        }
    };
    let ratio = if first * n as f64 >= total {
        1.0
    } else {
        let (mut lo, mut hi) = (1.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if sum(mid) < total {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut b = vec![0.0];
    let mut cell = if ratio == 1.0 { total / n as f64 } else { first };
    for _ in 0..n {
        let next = b.last().unwrap() + cell;
        b.push(next);
        cell *= ratio;
    }
    // remove the bisection residue
    let scale = total / b[n];
    b.iter().map(|v| v * scale).collect()
}
