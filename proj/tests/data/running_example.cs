C(0): 0 1
C(1): 2 3
C(2): 4 5 9
C(3): 6 7 8
C(4): 2 3 10
C(1|0,0): 2
C(2|0,0): 4 9
C(3|0,0): 6
C(1|0,1): 3
C(2|0,1): 5
C(3|0,1): 7 8
C(0|1,2): 0
C(3|1,2): 7 8
C(0|1,3): 1
C(3|1,3): 7 8
C(0|2,4): 0
C(3|2,4): 6 7
C(4|2,4): 2
C(0|2,5): 1
C(3|2,5): 7 8
C(4|2,5): 2 3
C(0|2,9): 0
C(3|2,9): 6 8
C(4|2,9): 2
C(0|3,6): 0
C(1|3,6):
C(2|3,6): 4 9
C(0|3,7): 1
C(1|3,7): 2 3
C(2|3,7): 4 5
C(0|3,8): 1
C(1|3,8): 2 3
C(2|3,8): 5 9
C(2|4,2): 4 5 9
C(2|4,3): 5
C(2|4,10):
