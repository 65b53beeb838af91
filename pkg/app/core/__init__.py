"""
Moteur de calcul exact pour l'algèbre de Cherednik rationnelle des groupes diédraux.
"""
