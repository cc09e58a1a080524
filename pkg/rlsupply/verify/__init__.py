''' Independent verification of the supply chain dynamics
'''
