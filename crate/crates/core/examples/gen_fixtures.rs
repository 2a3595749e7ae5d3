//! One-off generator for the committed micro fixtures.

use colorcert::graph::LabeledMultigraph;
use colorcert::io;

fn main() {
    let dir = std::path::Path::new("fixtures/micro");
    std::fs::create_dir_all(dir).unwrap();
    let put = |name: &str, g: &LabeledMultigraph| {
        io::write_graph(dir.join(format!("{name}.json")), g).unwrap();
        println!("{name}: {} vertices, {} edges", g.num_vertices(), g.num_edges());
    };

    put("k4", &LabeledMultigraph::complete(4));
    put("c5", &LabeledMultigraph::cycle(5));
    put("c6", &LabeledMultigraph::cycle(6));
    put("c7", &LabeledMultigraph::cycle(7));

    // Petersen graph: outer C5, inner 5-cycle with step 2, spokes.
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5, 0));
        edges.push((5 + i, 5 + (i + 2) % 5, 1));
        edges.push((i, 5 + i, 2));
    }
    put("petersen", &LabeledMultigraph::new(10, edges).unwrap());

    let path5 = LabeledMultigraph::new(5, (0..4).map(|i| (i, i + 1, 0))).unwrap();
    put("path5", &path5);

    // Spider: a center, three legs of length two.
    let tree = LabeledMultigraph::new(
        7,
        vec![(0, 1, 0), (0, 2, 0), (0, 3, 0), (1, 4, 0), (2, 5, 0), (3, 6, 0)],
    )
    .unwrap();
    put("tree", &tree);

    // Two vertices joined by a pair of parallel edges with distinct labels.
    put(
        "parallel_pair",
        &LabeledMultigraph::new(2, vec![(0, 1, 0), (0, 1, 1)]).unwrap(),
    );

    let mut grid = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            let v = 3 * r + c;
            if c < 2 {
                grid.push((v, v + 1, 0));
            }
            if r < 2 {
                grid.push((v, v + 3, 1));
            }
        }
    }
    put("grid_3x3", &LabeledMultigraph::new(9, grid).unwrap());

    let mut cube = Vec::new();
    for v in 0..8usize {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                cube.push((v, w, bit));
            }
        }
    }
    put("cube_q3", &LabeledMultigraph::new(8, cube).unwrap());

    // Hub 0 joined to a 5-cycle on 1..=5.
    let mut wheel = Vec::new();
    for i in 1..=5usize {
        wheel.push((0, i, 0));
        wheel.push((i, if i == 5 { 1 } else { i + 1 }, 1));
    }
    put("wheel_w5", &LabeledMultigraph::new(6, wheel).unwrap());

    let mut k33 = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            k33.push((a, b, 0));
        }
    }
    put("k33", &LabeledMultigraph::new(6, k33).unwrap());
}
