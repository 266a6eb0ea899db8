//! The expression language: parsing, canonical printing, and evaluation
//! into the free algebra, phase space, and cyclic words.

use ncalc::cyclic::SymplecticLayout;
use ncalc::parser::{eval_free, eval_necklace, eval_phase, parse, print, ParseEnv};
use ncalc::star::phase_display;

fn main() {
    // free algebra on x, y
    let env = ParseEnv::new(ncalc::word::default_gen_names(2));
    let e = parse("[x, y] * x - 2/3 * y", &env).unwrap();
    println!("parsed:   {}", print(&e, &env));
    println!("value:    {}", eval_free(&e, &env).unwrap());

    // round trip: print then parse is the identity
    let printed = print(&e, &env);
    assert_eq!(parse(&printed, &env).unwrap(), e);
    println!("parse(print(e)) == e");

    // phase space with the deformation parameter t
    let penv = ParseEnv::phase(1);
    let s = parse("star(x1, y1) - star(y1, x1)", &penv).unwrap();
    println!("x1*y1 - y1*x1 (star) = {}", phase_display(&eval_phase(&s, &penv, 1).unwrap()));

    // cyclic words
    let layout = SymplecticLayout::new(1);
    let nenv = ParseEnv::new(layout.names());
    let n = parse("cyc(x1*x1*y1) - 2 * cyc(y1)", &nenv).unwrap();
    println!(
        "necklace: {}",
        eval_necklace(&n, &nenv).unwrap().display(&layout.names())
    );

    // errors carry positions
    let err = parse("x +\n* y", &env).unwrap_err();
    println!("error example: {}", err);
}
