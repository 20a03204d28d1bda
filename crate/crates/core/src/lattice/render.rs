//! Grayscale frame rendering for lattice states.

use crate::runio::{Frame, LatticeShading};

use super::simulate::LatticeState;

/// Render a state with shading anchored at the equilibrium densities.
pub fn render_frame(state: &LatticeState, h_star: f64, p_star: f64) -> Frame {
    let shading = LatticeShading::for_equilibrium(h_star, p_star);
    let n = state.h.n();
    let mut bytes = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            bytes.push(shading.shade(state.h.get(r, c), state.p.get(r, c)));
        }
    }
    Frame::gray(n, n, bytes).expect("grid dimensions always match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Grid;

    #[test]
    fn empty_lattice_renders_black() {
        let state = LatticeState {
            t: 0,
            h: Grid::zeros(4),
            p: Grid::zeros(4),
        };
        let frame = render_frame(&state, 1.4, 0.7);
        let bytes = frame.to_bytes();
        assert!(bytes[bytes.len() - 16..].iter().all(|&b| b == 0));
    }

    #[test]
    fn occupied_patches_are_brighter_with_parasitoids() {
        let mut h = Grid::zeros(3);
        let mut p = Grid::zeros(3);
        h.set(0, 0, 1.4);
        h.set(1, 1, 1.4);
        p.set(1, 1, 0.7);
        let state = LatticeState { t: 0, h, p };
        let frame = render_frame(&state, 1.4, 0.7);
        let bytes = frame.to_bytes();
        let payload = &bytes[bytes.len() - 9..];
        assert!(payload[0] >= 64 && payload[0] <= 176); // hosts only
        assert!(payload[4] >= 192); // hosts plus parasitoids
        assert_eq!(payload[8], 0); // empty
    }
}
