#![no_main]

use libfuzzer_sys::fuzz_target;
use nextify::gen::{random_pair, random_tree, TreeConfig};
use nextify::{compare, Encoder, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// The input seeds a random tree and element pairs; keys must order like the
// comparator.
fuzz_target!(|data: &[u8]| {
    let mut seed = [0u8; 32];
    for (i, b) in data.iter().enumerate() {
        seed[i % 32] ^= b.rotate_left((i / 32) as u32);
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let tree = random_tree(&mut rng, &TreeConfig::default());
    let encoder = Encoder::new(&tree, Mode::Padded).unwrap();
    for _ in 0..8 {
        let (x, y) = random_pair(&mut rng, &tree);
        let expected = compare(&tree, &x, &y).unwrap();
        let (kx, ky) = (encoder.encode(&x).unwrap(), encoder.encode(&y).unwrap());
        assert_eq!(kx.as_bytes().cmp(ky.as_bytes()), expected, "{tree:?}\n{x:?}\n{y:?}");
    }
});
