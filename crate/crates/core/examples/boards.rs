//! Builds the three board families, checks a few properties and round-trips
//! one board through the edge-list format.
//!
//! ```text
//! cargo run --example boards
//! ```

use makerbreaker::graph::{components, er_graph, flower_snark, grid_graph, Graph, VertexSet};

fn describe(name: &str, g: &Graph) {
    let degrees: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    println!(
        "{name:<14} n={:<3} m={:<3} degree {}..{}  components {}",
        g.n(),
        g.edge_count(),
        degrees.iter().min().unwrap(),
        degrees.iter().max().unwrap(),
        components(g, &VertexSet::all(g.n())).len()
    );
}

fn main() -> makerbreaker::Result<()> {
    describe("grid 5x3", &grid_graph(5, 3)?);
    describe("grid 9x9", &grid_graph(9, 9)?);
    describe("flower snark 7", &flower_snark(7)?);
    for seed in 0..3 {
        describe(&format!("er(12,0.3) #{seed}"), &er_graph(12, 0.3, seed)?);
    }

    let g = flower_snark(5)?;
    let text = g.to_edge_list();
    assert_eq!(Graph::from_edge_list(&text)?, g);
    println!("\nflower snark 5 as an edge list:\n{}", text.lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("...");
    Ok(())
}
