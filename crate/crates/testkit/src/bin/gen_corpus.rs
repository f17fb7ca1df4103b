//! Regenerates the bundled degraded-image corpus under `corpus/` at the
//! workspace root. The corpus is committed; run this only when the scene
//! generator changes.

use dehaze_testkit::scenes::{clear_scene, hazify, underwater};
use dehaze_testkit::{corpus_dir, write_ppm};

fn main() {
    let dir = corpus_dir();
    std::fs::create_dir_all(&dir).expect("create corpus directory");

    let (width, height) = (128, 96);
    for i in 0..5u64 {
        let (scene, depth) = clear_scene(width, height, 1000 + i);
        let beta = 1.4 + 0.25 * i as f64;
        let img = hazify(&scene, &depth, beta);
        let path = dir.join(format!("hazy_{i:02}.ppm"));
        write_ppm(&path, &img).expect("write corpus image");
        println!("wrote {}", path.display());
    }
    for i in 0..5u64 {
        let (scene, depth) = clear_scene(width, height, 2000 + i);
        let strength = 0.9 + 0.2 * i as f64;
        let img = underwater(&scene, &depth, strength);
        let path = dir.join(format!("underwater_{i:02}.ppm"));
        write_ppm(&path, &img).expect("write corpus image");
        println!("wrote {}", path.display());
    }
}
