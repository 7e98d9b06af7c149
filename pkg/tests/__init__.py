# mibench tests package
