//! Quasienergy bands and group velocity of the free walk.
//!
//! cos E(k, θ) = −sin k sin θ: the gap is widest at θ = 0 (flat bands,
//! confined walker) and closes at θ = π/2, where the dispersion is a
//! massless cone and |v_g| → 1.

use std::f64::consts::PI;

use spinwalk::semiclassical::{group_velocity, quasienergy};

fn main() {
    println!("band structure E(k):");
    print!("   k/π    ");
    for theta in [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0] {
        print!("θ={theta:4.2}  ");
    }
    println!();
    for i in 0..=16 {
        let k = -PI + 2.0 * PI * i as f64 / 16.0;
        print!("  {:+.2}   ", k / PI);
        for theta in [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0] {
            print!("{:6.3}  ", quasienergy(k, theta).e_plus);
        }
        println!();
    }

    println!("\ngroup velocity v_g(p, θ) at p = k − π/2:");
    print!("   p/π    ");
    for theta in [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0] {
        print!("θ={theta:4.2}  ");
    }
    println!();
    for i in 0..=8 {
        let p = -PI / 2.0 + PI * i as f64 / 8.0;
        print!("  {:+.2}   ", p / PI);
        for theta in [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0] {
            match group_velocity(p, theta) {
                Ok(v) => print!("{v:+6.3}  "),
                Err(_) => print!("  cone  "),
            }
        }
        println!();
    }
    println!("\nθ → 0 freezes the walker (v_g → 0); θ → π/2 moves it at speed 1.");
}
