//! Points of toric schemes glued from affine charts.

use monoscheme::cone::fan::gallery;
use monoscheme::scheme::scheme_points;

fn main() -> monoscheme::Result<()> {
    for (name, fan) in gallery::all() {
        let pts = scheme_points(&fan)?;
        println!("{name}: {} points over {} charts", pts.len(), pts.charts.len());
        for (i, &c) in pts.points.iter().enumerate() {
            let below: Vec<usize> = pts.specialization.iter().filter(|&&(a, _)| a == i).map(|&(_, b)| b).collect();
            println!("  point {i} (cone {}) specializes to {:?}", fan.cones()[c], below);
        }
    }
    Ok(())
}
