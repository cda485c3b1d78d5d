//! Built-in problem instances under stable ids.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{BenchError, Result};
use crate::schema::{ObjectiveSpec, ProblemSpec, SetSpec};
use projgrad::ProblemInstance;

pub struct Entry {
    pub id: &'static str,
    pub description: &'static str,
    build: fn(u64) -> ProblemSpec,
}

pub const ENTRIES: &[Entry] = &[
    Entry {
        id: "ray-1d",
        description: "x²/2 on [1, ∞) from x0 = 2; solution 1",
        build: |_| ProblemSpec {
            objective: ObjectiveSpec::Quadratic { q: vec![vec![1.0]], b: vec![0.0], c: 0.0 },
            set: SetSpec::Box { lower: vec![Some(1.0)], upper: vec![None] },
            x0: vec![2.0],
            known_solution: Some(vec![1.0]),
            known_fstar: Some(0.5),
        },
    },
    Entry {
        id: "quadratic-box",
        description: "½‖x − (2,2)‖² on [0,1]² from the origin; solution (1,1)",
        build: |_| ProblemSpec {
            objective: ObjectiveSpec::Quadratic {
                q: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                b: vec![-2.0, -2.0],
                c: 4.0,
            },
            set: unit_box(2),
            x0: vec![0.0, 0.0],
            known_solution: Some(vec![1.0, 1.0]),
            known_fstar: Some(1.0),
        },
    },
    Entry {
        id: "quadratic-interior",
        description: "½‖x − (½,½)‖² on [0,1]² from the origin; L = 1, solution (½,½)",
        build: |_| ProblemSpec {
            objective: ObjectiveSpec::Quadratic {
                q: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                b: vec![-0.5, -0.5],
                c: 0.25,
            },
            set: unit_box(2),
            x0: vec![0.0, 0.0],
            known_solution: Some(vec![0.5, 0.5]),
            known_fstar: Some(0.0),
        },
    },
    Entry {
        id: "pnorm4-ball",
        description: "¼‖x − (2,0)‖⁴ on the unit ball from (0,1); solution (1,0)",
        build: |_| ProblemSpec {
            objective: ObjectiveSpec::Pnorm { p: 4.0, shift: vec![2.0, 0.0] },
            set: SetSpec::Ball { center: vec![0.0, 0.0], radius: 1.0 },
            x0: vec![0.0, 1.0],
            known_solution: Some(vec![1.0, 0.0]),
            known_fstar: Some(0.25),
        },
    },
    Entry {
        id: "pnorm1.5-box",
        description: "(2/3)‖x − (1.5,0.5)‖^1.5 on [0,1]² from the origin; solution (1,½)",
        build: |_| ProblemSpec {
            objective: ObjectiveSpec::Pnorm { p: 1.5, shift: vec![1.5, 0.5] },
            set: unit_box(2),
            x0: vec![0.0, 0.0],
            known_solution: Some(vec![1.0, 0.5]),
            known_fstar: Some(0.5f64.powf(1.5) / 1.5),
        },
    },
    Entry {
        id: "flat",
        description: "½(x₁ − 1)² on [0,2]² from (0,1.7); solutions {1} × [0,2], nearest (1,1.7)",
        build: |_| ProblemSpec {
            objective: ObjectiveSpec::Quadratic {
                q: vec![vec![1.0, 0.0], vec![0.0, 0.0]],
                b: vec![-1.0, 0.0],
                c: 0.5,
            },
            set: SetSpec::Box { lower: vec![Some(0.0); 2], upper: vec![Some(2.0); 2] },
            x0: vec![0.0, 1.7],
            known_solution: Some(vec![1.0, 1.7]),
            known_fstar: Some(0.0),
        },
    },
    Entry {
        id: "logsumexp-simplex",
        description: "log-sum-exp of 4 random affine maps on the 3-simplex; depends on the seed",
        build: |seed| {
            let mut rng = StdRng::seed_from_u64(seed);
            let rows = (0..4).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let offsets = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            ProblemSpec {
                objective: ObjectiveSpec::Logsumexp { rows, offsets },
                set: SetSpec::Simplex { dim: 3, scale: 1.0 },
                x0: vec![1.0 / 3.0; 3],
                known_solution: None,
                known_fstar: None,
            }
        },
    },
];

fn unit_box(n: usize) -> SetSpec {
    SetSpec::Box { lower: vec![Some(0.0); n], upper: vec![Some(1.0); n] }
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.id)
}

pub fn problem_spec(id: &str, seed: u64) -> Result<ProblemSpec> {
    ENTRIES
        .iter()
        .find(|e| e.id == id)
        .map(|e| (e.build)(seed))
        .ok_or_else(|| BenchError::UnknownInstance(id.to_string()))
}

pub fn instance(id: &str, seed: u64) -> Result<ProblemInstance> {
    problem_spec(id, seed)?.build()
}
