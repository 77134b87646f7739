# qubits=4 gates=6
8 6
1 0 0 0 0 0
1 0 0 1 0 0
0 1 0 0 0 0
0 1 0 0 1 0
0 0 1 1 1 1
0 0 1 0 1 1
0 0 0 1 0 0
1 1 1 1 0 0
