use spectile_core::*;

fn main() {
    // Scan d=3 configs by hand, find the first panic case.
    for l2 in 2..11u64 {
        for l3 in (l2 + 2)..(l2 + 11) {
            let omega: IntervalUnion = format!("0,1/3;{}/3,1/3;{}/3,1/3", l2, l3).parse().unwrap();
            // candidate spectra on (1/3)Z
            for m1 in 1..9u64 {
                for m2 in (m1 + 1)..9u64 {
                    let residues = vec![
                        rational::ratio(0, 1),
                        rational::ratio(m1 as i64, 3),
                        rational::ratio(m2 as i64, 3),
                    ];
                    let Ok(spec) = PeriodicSpectrum::new(3, residues) else { continue };
                    if !verify_orthogonality(&omega, &spec) { continue; }
                    let comp = verify_completeness(&omega, &spec).unwrap();
                    if !comp.admits_spectrality() { continue; }
                    let tiles = tiles_decision(&omega, None).unwrap();
                    if !tiles.tiles() {
                        println!("SPECTRAL NON-TILING(greedy): omega={omega} spec=d=3;0,{m1}/3,{m2}/3");
                    }
                }
            }
        }
    }
    println!("scan done");
}
