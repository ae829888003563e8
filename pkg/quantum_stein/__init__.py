# Quantum Stein bounds package: Renyi divergences, finite-size Stein bounds, exact oracle
