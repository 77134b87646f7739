# qubits=3 gates=3
6 3
1 1 1
0 0 1
0 1 1
1 0 0
1 1 1
1 1 0
