#pragma once

// Generated from data/elements.csv; keep the two in sync.

namespace llema::chem::detail {

inline constexpr const char* kElementTableCsv = R"csv(# llema element table v1
symbol,Z,group,period,mass,electronegativity,oxidation_states,earth_abundant,toxic
H,1,1,1,1.008,2.20,-1;1,1,0
He,2,18,1,4.0026,,,1,0
Li,3,1,2,6.94,0.98,1,1,0
Be,4,2,2,9.0122,1.57,2,1,1
B,5,13,2,10.81,2.04,3,1,0
C,6,14,2,12.011,2.55,-4;4,1,0
N,7,15,2,14.007,3.04,-3;3;5,1,0
O,8,16,2,15.999,3.44,-2,1,0
F,9,17,2,18.998,3.98,-1,1,0
Ne,10,18,2,20.180,,,1,0
Na,11,1,3,22.990,0.93,1,1,0
Mg,12,2,3,24.305,1.31,2,1,0
Al,13,13,3,26.982,1.61,3,1,0
Si,14,14,3,28.085,1.90,-4;4,1,0
P,15,15,3,30.974,2.19,-3;3;5,1,0
S,16,16,3,32.06,2.58,-2;2;4;6,1,0
Cl,17,17,3,35.453,3.16,-1;1;3;5;7,1,0
Ar,18,18,3,39.948,,,1,0
K,19,1,4,39.098,0.82,1,1,0
Ca,20,2,4,40.078,1.00,2,1,0
Sc,21,3,4,44.956,1.36,3,0,0
Ti,22,4,4,47.867,1.54,2;3;4,1,0
V,23,5,4,50.942,1.63,2;3;4;5,1,0
Cr,24,6,4,51.996,1.66,2;3;6,1,0
Mn,25,7,4,54.938,1.55,2;3;4;7,1,0
Fe,26,8,4,55.845,1.83,2;3,1,0
Co,27,9,4,58.933,1.88,2;3,1,0
Ni,28,10,4,58.693,1.91,2,1,0
Cu,29,11,4,63.546,1.90,1;2,1,0
Zn,30,12,4,65.38,1.65,2,1,0
Ga,31,13,4,69.723,1.81,3,1,0
Ge,32,14,4,72.630,2.01,-4;2;4,1,0
As,33,15,4,74.922,2.18,-3;3;5,1,1
Se,34,16,4,78.971,2.55,-2;4;6,1,1
Br,35,17,4,79.904,2.96,-1;1;3;5,1,0
Kr,36,18,4,83.798,3.00,2,1,0
Rb,37,1,5,85.468,0.82,1,1,0
Sr,38,2,5,87.62,0.95,2,1,0
Y,39,3,5,88.906,1.22,3,1,0
Zr,40,4,5,91.224,1.33,4,1,0
Nb,41,5,5,92.906,1.60,3;5,1,0
Mo,42,6,5,95.95,2.16,4;6,1,0
Tc,43,7,5,98.0,1.90,4;7,1,0
Ru,44,8,5,101.07,2.20,3;4,0,0
Rh,45,9,5,102.91,2.28,3,0,0
Pd,46,10,5,106.42,2.20,2;4,0,0
Ag,47,11,5,107.87,1.93,1,0,0
Cd,48,12,5,112.41,1.69,2,1,1
In,49,13,5,114.82,1.78,3,0,0
Sn,50,14,5,118.71,1.96,-4;2;4,1,0
Sb,51,15,5,121.76,2.05,-3;3;5,1,1
Te,52,16,5,127.60,2.10,-2;4;6,0,0
I,53,17,5,126.90,2.66,-1;1;5;7,1,0
Xe,54,18,5,131.29,2.60,2;4;6,1,0
Cs,55,1,6,132.91,0.79,1,1,0
Ba,56,2,6,137.33,0.89,2,1,0
La,57,3,6,138.91,1.10,3,0,0
Ce,58,3,6,140.12,1.12,3;4,0,0
Pr,59,3,6,140.91,1.13,3,0,0
Nd,60,3,6,144.24,1.14,3,0,0
Pm,61,3,6,145.0,1.13,3,0,0
Sm,62,3,6,150.36,1.17,2;3,0,0
Eu,63,3,6,151.96,1.20,2;3,0,0
Gd,64,3,6,157.25,1.20,3,0,0
Tb,65,3,6,158.93,1.10,3,0,0
Dy,66,3,6,162.50,1.22,3,0,0
Ho,67,3,6,164.93,1.23,3,0,0
Er,68,3,6,167.26,1.24,3,0,0
Tm,69,3,6,168.93,1.25,3,0,0
Yb,70,3,6,173.05,1.10,2;3,0,0
Lu,71,3,6,174.97,1.27,3,0,0
Hf,72,4,6,178.49,1.30,4,0,0
Ta,73,5,6,180.95,1.50,5,0,0
W,74,6,6,183.84,2.36,4;6,0,0
Re,75,7,6,186.21,1.90,4;7,0,0
Os,76,8,6,190.23,2.20,4,0,0
Ir,77,9,6,192.22,2.20,3;4,0,0
Pt,78,10,6,195.08,2.28,2;4,0,0
Au,79,11,6,196.97,2.54,1;3,0,0
Hg,80,12,6,200.59,2.00,1;2,0,1
Tl,81,13,6,204.38,1.62,1;3,0,1
Pb,82,14,6,207.2,2.33,2;4,0,1
Bi,83,15,6,208.98,2.02,3,0,0
Po,84,16,6,209.0,2.00,-2;2;4,0,0
At,85,17,6,210.0,2.20,-1;1,0,0
Rn,86,18,6,222.0,2.20,2,0,0
Fr,87,1,7,223.0,0.70,1,0,0
Ra,88,2,7,226.0,0.90,2,0,0
Ac,89,3,7,227.0,1.10,3,0,0
Th,90,3,7,232.04,1.30,4,0,1
Pa,91,3,7,231.04,1.50,5,0,0
U,92,3,7,238.03,1.38,3;4;5;6,0,1
Np,93,3,7,237.0,1.36,5,0,0
Pu,94,3,7,244.0,1.28,4,0,0
)csv";

}  // namespace llema::chem::detail
