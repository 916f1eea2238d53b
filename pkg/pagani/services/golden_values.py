# Generated by scripts/generate_reference_values.py; do not edit by hand.
# f7: exact multinomial expansion of (sum x_i^2)^11, each monomial integrated exactly.
# f8: tensor-product Gauss-Legendre over the symmetric point multisets, resolution
#     raised until successive levels agree to 1e-10 relative.

F7_BOX_VALUES = {
    1: 0.043478260869565216,
    2: 15.717594201912416,
    3: 421.4411182099484,
    8: 1495369.2837579779,
}

F8_BOX_VALUES = {
    1: 0.0625,
    2: 2.928532920538888,
    3: 27.53196057322577,
    8: 8879.851175414,
}
